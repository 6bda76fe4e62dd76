#pragma once

#include <string>
#include <vector>

namespace debateforge {

// One renderable report table. Rows are plain strings so every number is
// formatted exactly once (deterministic output regardless of renderer).
struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Fixed-point with the given number of decimals, locale-independent.
std::string format_real(double value, int decimals = 4);

// Boxless aligned layout:
//   Title
//   ------
//   Col1       Col2
//   ----       ----
//   value      value
// Left-aligns the first column, right-aligns the rest.
std::string render_pretty(const Table& table);

// Tab-separated: header line then one line per row. Title is omitted so the
// output machine-parses cleanly.
std::string render_tsv(const Table& table);

}  // namespace debateforge
