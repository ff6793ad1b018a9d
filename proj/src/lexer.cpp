#include "lexer.hpp"

#include <array>
#include <cctype>
#include <set>

#include "chainmail/frontend.hpp"

namespace chainmail::detail {

namespace {

bool word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

constexpr std::array<std::string_view, 4> kTwoChar = {":=", "->", ">=", "~>"};
constexpr std::string_view kOneChar = "(){}[],;.=:+";
// U+2933 WAVE ARROW POINTING DIRECTLY RIGHT, the transitive-access arrow.
constexpr std::string_view kWaveArrow = "\xE2\xA4\xB3";

}  // namespace

bool is_keyword(const std::string& word) {
  static const std::set<std::string> keywords = {
      "class",   "field",  "method",  "ghost",    "return",   "new",     "if",
      "then",    "else",   "true",    "false",    "null",     "not",     "and",
      "or",      "forall", "exists",  "next",     "will",     "prev",    "was",
      "in",      "access", "calls",   "external", "internal", "changes", "spec",
      "assert",  "SET",    "_"};
  return keywords.count(word) > 0;
}

std::vector<Token> tokenize(std::string_view text, std::shared_ptr<const std::string> file) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  bool spaced = true;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  auto emit = [&](TokenKind kind, std::size_t length) {
    Token t;
    t.kind = kind;
    t.text = std::string(text.substr(i, length));
    t.span.file = file;
    t.span.line = line;
    t.span.column = column;
    t.spaced = spaced;
    advance(length);
    t.span.end_line = line;
    t.span.end_column = column;
    out.push_back(std::move(t));
    spaced = false;
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      spaced = true;
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      spaced = true;
      continue;
    }
    if (word_start(c)) {
      std::size_t n = 1;
      while (i + n < text.size() && word_char(text[i + n])) ++n;
      emit(TokenKind::Word, n);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t n = 1;
      while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n]))) ++n;
      emit(TokenKind::Nat, n);
      continue;
    }
    if (text.substr(i, kWaveArrow.size()) == kWaveArrow) {
      emit(TokenKind::Punct, kWaveArrow.size());
      out.back().text = "~>";
      continue;
    }
    bool matched = false;
    for (auto p : kTwoChar) {
      if (text.substr(i, 2) == p) {
        emit(TokenKind::Punct, 2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kOneChar.find(c) != std::string_view::npos) {
      emit(TokenKind::Punct, 1);
      continue;
    }
    SourceSpan span{file, line, column, line, column + 1};
    throw ParseError(std::string("unexpected character '") + c + "'", span);
  }
  Token end;
  end.kind = TokenKind::End;
  end.span = SourceSpan{file, line, column, line, column};
  end.spaced = true;
  out.push_back(std::move(end));
  return out;
}

}  // namespace chainmail::detail
