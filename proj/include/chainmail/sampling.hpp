#pragma once

#include <random>
#include <utility>

#include "chainmail/checker.hpp"

namespace chainmail {

/// Node with a `next` field and the recursive ghosts `acyclic` and `last`.
ModuleDef node_module();
/// Top frame binds `acyc` (a node whose next is null) and `cyc` (a node whose next is itself).
Config node_fixture();
Sample node_sample();

/// A recorded run of a random driver over a small Cell/Agent program, at a random position.
Sample random_run_sample(std::mt19937_64& rng);
/// Mostly random runs, with the node fixture drawn about one time in four.
Sampler default_sampler();

AssertionPtr random_assertion(std::mt19937_64& rng, const Sample& s, int depth);

/// Classes named `<prefix><k>` with random fields, methods and ghosts.
ModuleDef random_module(std::mt19937_64& rng, const std::string& prefix, int max_classes);

/// A module with a configuration whose next step runs one of its statements.
std::pair<ModuleDef, Config> random_step_instance(std::mt19937_64& rng);

}  // namespace chainmail
