#include "debateforge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace debateforge {

std::string format_real(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string render_pretty(const Table& table) {
  std::ostringstream out;
  if (!table.title.empty()) {
    out << table.title << '\n' << std::string(table.title.size(), '-') << '\n';
  }
  std::vector<std::size_t> widths(table.header.size(), 0);
  auto widen = [&widths](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < widths.size(); ++i) {
      widths[i] = std::max(widths[i], cells[i].size());
    }
  };
  widen(table.header);
  for (const auto& row : table.rows) widen(row);

  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const std::string cell = i < cells.size() ? cells[i] : std::string();
      if (i > 0) out << "  ";
      if (i == 0) {
        out << cell;
        if (i + 1 < widths.size()) out << std::string(widths[i] - cell.size(), ' ');
      } else {
        out << std::string(widths[i] - cell.size(), ' ') << cell;
      }
    }
    out << '\n';
  };
  emit(table.header);
  std::vector<std::string> rules;
  rules.reserve(table.header.size());
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    rules.push_back(std::string(table.header[i].size(), '-'));
  }
  emit(rules);
  for (const auto& row : table.rows) emit(row);
  return out.str();
}

std::string render_tsv(const Table& table) {
  std::ostringstream out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << '\t';
      out << cells[i];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out.str();
}

}  // namespace debateforge
