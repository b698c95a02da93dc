#include "tabqa/sql/guard.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "tabqa/error.hpp"

namespace tabqa::sql {

namespace {

struct Token {
  enum Kind { Word, Semicolon, Other } kind;
  std::string text;  // uppercased for words
  std::size_t begin;
  std::size_t end;
};

[[noreturn]] void forbid(const std::string& reason) { throw Error(ErrorKind::ForbiddenSql, reason); }

// Lexes just enough SQL to see keywords and statement separators: quoted
// strings/identifiers and comments are skipped as opaque tokens.
std::vector<Token> lex(std::string_view q) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto skip_quoted = [&](char close) {
    std::size_t start = i++;
    while (true) {
      if (i >= q.size()) forbid("unterminated quoted token starting at offset " + std::to_string(start));
      if (q[i] == close) {
        if (close != ']' && i + 1 < q.size() && q[i + 1] == close) {
          i += 2;
          continue;
        }
        ++i;
        return;
      }
      ++i;
    }
  };
  while (i < q.size()) {
    unsigned char c = static_cast<unsigned char>(q[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (q.compare(i, 2, "--") == 0) {
      while (i < q.size() && q[i] != '\n') ++i;
    } else if (q.compare(i, 2, "/*") == 0) {
      auto close = q.find("*/", i + 2);
      if (close == std::string_view::npos) forbid("unterminated block comment");
      i = close + 2;
    } else if (c == '\'' || c == '"' || c == '`' || c == '[') {
      std::size_t start = i;
      skip_quoted(c == '[' ? ']' : static_cast<char>(c));
      tokens.push_back({Token::Other, {}, start, i});
    } else if (c == ';') {
      tokens.push_back({Token::Semicolon, ";", i, i + 1});
      ++i;
    } else if (std::isalpha(c) || c == '_') {
      std::size_t start = i;
      while (i < q.size() && (std::isalnum(static_cast<unsigned char>(q[i])) || q[i] == '_' || q[i] == '$')) ++i;
      std::string word(q.substr(start, i - start));
      for (char& ch : word) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      tokens.push_back({Token::Word, std::move(word), start, i});
    } else {
      tokens.push_back({Token::Other, std::string(1, static_cast<char>(c)), i, i + 1});
      ++i;
    }
  }
  return tokens;
}

}  // namespace

std::string guard_sql(std::string_view query) {
  auto tokens = lex(query);
  if (tokens.empty()) forbid("empty query");
  const Token& first = tokens.front();
  if (first.kind != Token::Word || first.text != "SELECT") {
    std::string got = first.kind == Token::Word ? first.text : std::string(query.substr(first.begin, first.end - first.begin));
    if (got == "WITH") forbid("WITH clauses are not allowed");
    forbid("only a single SELECT statement is allowed, got '" + got + "'");
  }
  std::optional<std::size_t> statement_end;
  for (const Token& t : tokens) {
    if (t.kind == Token::Semicolon) {
      if (!statement_end) statement_end = t.begin;
      continue;
    }
    if (statement_end) forbid("multiple statements are not allowed");
    if (t.kind == Token::Word && t.text == "WITH") forbid("WITH clauses are not allowed");
  }
  std::size_t end = statement_end.value_or(tokens.back().end);
  return std::string(query.substr(first.begin, end - first.begin));
}

}  // namespace tabqa::sql
