#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "chainmail/ast.hpp"

namespace chainmail::detail {

enum class TokenKind { Word, Nat, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceSpan span;
  /// Whitespace or a comment precedes this token.
  bool spaced = false;
};

/// Splits source text into words, numbers and punctuation; `//` comments are skipped.
std::vector<Token> tokenize(std::string_view text, std::shared_ptr<const std::string> file);

bool is_keyword(const std::string& word);

}  // namespace chainmail::detail
