#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>

#include "tabqa/table/columns.hpp"
#include "tabqa/table/csv.hpp"
#include "tabqa/table/render.hpp"
#include "tabqa/table/sanitize.hpp"
#include "test_util.hpp"

using namespace tabqa;
using namespace tabqa::table;
using tabqa::testing::kind_of;
using tabqa::testing::make_table;
using tabqa::testing::ScriptedRole;
using tabqa::testing::temp_path;

TEST(Csv, HandlesQuotesBreaksBomAndBlankLines) {
  auto rows = parse_csv("\xEF\xBB\xBF" "a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\r\n\"two\nlines\",\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "a");
  EXPECT_EQ(rows[1][0], "x, y");
  EXPECT_EQ(rows[1][1], "say \"hi\"");
  EXPECT_EQ(rows[2][0], "two\nlines");
  EXPECT_FALSE(rows[2][1].has_value());
}

TEST(Csv, EscapeRoundTrips) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  std::vector<std::string> fields = {"a\"b", "x\ny", "p,q", "ok"};
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_escape(fields[i]);
  auto rows = parse_csv(line);
  ASSERT_EQ(rows.size(), 1u);
  for (std::size_t i = 0; i < fields.size(); ++i) EXPECT_EQ(rows[0][i], fields[i]);
}

TEST(Sanitize, Examples) {
  auto s = sanitize_columns({"🌟 rating", "Name", "name", "", "  spaced  ", "a-b", "ok_1"});
  EXPECT_EQ(s.names[0], "_h" + [] {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04x", cluster_hash("🌟"));
    return std::string(buf);
  }() + "_ rating");
  EXPECT_EQ(s.names[1], "Name");
  EXPECT_EQ(s.names[2], "name_2");
  EXPECT_EQ(s.names[3], "unnamed");
  EXPECT_EQ(s.names[4], "spaced");
  EXPECT_NE(s.names[5], "a-b");
  EXPECT_EQ(s.names[6], "ok_1");
  EXPECT_EQ(s.map.restore(s.names[0]), "🌟 rating");
  EXPECT_EQ(s.map.sanitized_for("a-b"), s.names[5]);
  EXPECT_EQ(s.map.restore("missing"), "");
  EXPECT_EQ(s.map.changed().size(), 5u);
}

TEST(Sanitize, SuffixesAvoidExistingNames) {
  auto s = sanitize_columns({"x", "x_2", "X"});
  std::set<std::string> lowered;
  for (auto n : s.names) {
    std::transform(n.begin(), n.end(), n.begin(), ::tolower);
    EXPECT_TRUE(lowered.insert(n).second) << n;
  }
}

namespace {

std::string random_header(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {"a", "B", "z", "0", "_", " ", "-", ".", "é",
                                                  "🌟", "日本", "\"", "'", "[", "]", "%", "\t", "x"};
  std::uniform_int_distribution<int> len(0, 6), pick(0, static_cast<int>(pieces.size()) - 1);
  std::string h;
  for (int i = len(rng); i > 0; --i) h += pieces[pick(rng)];
  return h;
}

}  // namespace

TEST(Sanitize, PropertiesOverRandomHeaderLists) {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> width(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> headers;
    for (int i = width(rng); i > 0; --i) {
      headers.push_back(headers.empty() || rng() % 4 ? random_header(rng) : headers[rng() % headers.size()]);
    }
    auto s = sanitize_columns(headers);
    ASSERT_EQ(s.names.size(), headers.size());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < headers.size(); ++i) {
      EXPECT_TRUE(is_safe_identifier(s.names[i])) << s.names[i];
      std::string low = s.names[i];
      std::transform(low.begin(), low.end(), low.begin(), ::tolower);
      EXPECT_TRUE(seen.insert(low).second);
      EXPECT_EQ(s.map.restore(s.names[i]), headers[i]);
    }
    EXPECT_EQ(sanitize_columns(headers).names, s.names);
  }
}

TEST(Sanitize, SafeUniqueNamesAreUnchanged) {
  auto s = sanitize_columns({"age", "first name", "Total_2"});
  EXPECT_EQ(s.names, (std::vector<std::string>{"age", "first name", "Total_2"}));
  EXPECT_TRUE(s.map.changed().empty());
}

TEST(Table, InfersColumnTypes) {
  auto t = make_table({{"i", "d", "b", "when", "s", "nulls"},
                       {"1", "2.5", "True", "2021-03-04", "x", ""},
                       {"-7", "3", "false", "2021-03-05T10:00:00", "1", ""}});
  std::vector<DType> got;
  for (const auto& c : t->columns()) got.push_back(c.dtype);
  EXPECT_EQ(got, (std::vector<DType>{DType::Integer, DType::Decimal, DType::Boolean, DType::Datetime,
                                     DType::Text, DType::Text}));
  EXPECT_EQ(t->find("d"), 1u);
  EXPECT_FALSE(t->find("zz"));
}

TEST(Table, LoadErrors) {
  EXPECT_EQ(kind_of([] { load_table("/nonexistent/file.csv"); }), ErrorKind::UnreadableFile);
  auto path = temp_path("empty.csv");
  std::ofstream(path) << "";
  EXPECT_EQ(kind_of([&] { load_table(path); }), ErrorKind::EmptyTable);
  std::ofstream(path) << "a,b\n";
  EXPECT_EQ(kind_of([&] { load_table(path); }), ErrorKind::EmptyTable);
  std::ofstream(path) << "a,b\n1,2\n3\n";
  EXPECT_EQ(kind_of([&] { load_table(path); }), ErrorKind::RaggedRows);
  std::filesystem::remove(path);
}

TEST(Table, WriteCsvUsesSanitizedHeadersAndReloads) {
  auto t = make_table({{"a-b", "note"}, {"1", "x, \"y\""}, {"2", ""}});
  auto path = temp_path("out.csv");
  write_csv(*t, path);
  auto back = load_table(path, "t");
  EXPECT_EQ(back->column_names(), t->column_names());
  EXPECT_EQ(back->rows(), t->rows());
  std::filesystem::remove(path);
}

TEST(Render, MarkdownEscapesAndUsesRequestedHeaders) {
  auto t = make_table({{"a-b", "note"}, {"1", "x|y\nz"}, {"2", ""}});
  std::vector<std::size_t> cols = {0, 1};
  std::string md = markdown_table(*t, cols, {0, 1}, true);
  EXPECT_NE(md.find("| a-b | note |"), std::string::npos) << md;
  EXPECT_NE(md.find("x\\|y<br>z"), std::string::npos);
  EXPECT_EQ(markdown_table(*t, cols, {}).find("a-b"), std::string::npos);
}

TEST(Render, PythonForms) {
  auto t = make_table({{"age", "name", "ok"}, {"30", "Ann", "True"}});
  EXPECT_EQ(python_list({"a", "b"}), "['a', 'b']");
  EXPECT_EQ(python_row_dict(*t, {0, 1, 2}, 0), "{'age': 30, 'name': 'Ann', 'ok': True}");
  EXPECT_EQ(python_dtype_pairs(*t, {0, 1}), "[('age', 'integer'), ('name', 'text')]");
  EXPECT_EQ(first_rows(*t, 3), (std::vector<std::size_t>{0}));
}

TEST(Columns, ParsesSanitizedOriginalAndCaseVariants) {
  auto t = make_table({{"Age", "home town", "x-y"}, {"1", "a", "b"}});
  auto picked = parse_column_list("reasoning\nCOLUMNS: age, 'home town', x-y, ghost", *t);
  EXPECT_EQ(picked.size(), 3u);
  EXPECT_EQ(picked[0], "Age");
}

TEST(Columns, SelectorFallsBackToAllColumns) {
  auto t = make_table({{"a", "b", "c"}, {"1", "2", "3"}});
  Question q{"q1", "what?", std::nullopt, "t"};
  ScriptedRole good([](const std::string&) { return "Because.\nCOLUMNS: c, a"; });
  auto sel = select_columns(q, *t, good.role);
  EXPECT_EQ(sel.selected, (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(sel.rationale, "Because.");
  ScriptedRole inline_marker([](const std::string&) { return "Only b matters. Columns: b"; });
  EXPECT_EQ(select_columns(q, *t, inline_marker.role).rationale, "Only b matters.");

  ScriptedRole bad([](const std::string&) { return "COLUMNS: nothing"; });
  EXPECT_EQ(select_columns(q, *t, bad.role).selected, t->column_names());

  auto single = make_table({{"only"}, {"1"}});
  ScriptedRole unused([](const std::string&) { return ""; });
  EXPECT_EQ(select_columns(q, *single, unused.role).selected, (std::vector<std::string>{"only"}));
  EXPECT_EQ(unused.calls, 0);
}

TEST(Columns, ExplanationsDefaultToNames) {
  auto t = make_table({{"hp", "atk"}, {"1", "2"}});
  ScriptedRole r([](const std::string&) { return "NAMES:\nhp -> hit points\nmystery -> x"; });
  Transcript tr;
  auto m = explain_columns(*t, r.role, &tr);
  EXPECT_EQ(m.at("hp"), "hit points");
  EXPECT_EQ(m.at("atk"), "atk");
  EXPECT_EQ(m.size(), 2u);
  ASSERT_EQ(tr.size(), 1u);
}

TEST(Sanitize, DocumentedCases) {
  auto star = sanitize_columns({"score⭐"});
  char hex[8];
  std::snprintf(hex, sizeof hex, "%04x", cluster_hash("⭐"));
  EXPECT_EQ(star.names[0], std::string("score_h") + hex + "_");
  EXPECT_EQ(star.map.changed().size(), 1u);
  auto collide = sanitize_columns({"a🔥", "a🔥 "});
  EXPECT_EQ(collide.names[1], collide.names[0] + "_2");
  auto path = temp_path("mood.csv");
  std::ofstream(path) << "mood🔥,age\nok,1\n";
  auto t = load_table(path);
  EXPECT_NE(t->columns()[0].name, "mood🔥");
  EXPECT_EQ(t->sanitization_map().restore(t->columns()[0].name), "mood🔥");
  EXPECT_EQ(t->dataset_id(), path.stem().string());
  std::filesystem::remove(path);
}
