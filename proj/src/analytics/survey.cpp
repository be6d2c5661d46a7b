#include "primmdebug/analytics/survey.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "primmdebug/error.hpp"

namespace primmdebug::analytics {
namespace {

// RFC 4180-ish: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::optional<double> SurveyTable::value(std::string_view participant,
                                         std::string_view item) const {
  auto row = responses.find(participant);
  if (row == responses.end()) return std::nullopt;
  auto col = std::find(item_ids.begin(), item_ids.end(), item);
  if (col == item_ids.end()) return std::nullopt;
  return row->second[static_cast<std::size_t>(col - item_ids.begin())];
}

SurveyTable parse_survey_csv(std::string_view text, SurveyScale scale) {
  SurveyTable table;
  table.scale = std::move(scale);

  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kSchema, "survey: missing header row");
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  if (header.empty() || header.front() != "participant_id") {
    throw Error(ErrorCode::kSchema, "survey: first column must be participant_id");
  }
  table.item_ids.assign(header.begin() + 1, header.end());
  std::set<std::string> seen_items;
  for (const auto& id : table.item_ids) {
    if (id.empty() || !seen_items.insert(id).second) {
      throw Error(ErrorCode::kSchema, "survey: empty or duplicate item id '" + id + "'");
    }
  }
  std::vector<std::string> required = table.scale.restrictive_items;
  required.push_back(table.scale.sifft_item);
  for (const auto& item : required) {
    if (!seen_items.contains(item)) {
      throw Error(ErrorCode::kSchema, "survey: missing item column '" + item + "'");
    }
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    const std::string where = "survey line " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kSchema, where + ": expected " + std::to_string(header.size()) +
                                          " fields, got " + std::to_string(fields.size()));
    }
    const std::string participant = trim(fields.front());
    if (participant.empty()) throw Error(ErrorCode::kSchema, where + ": empty participant_id");
    if (table.responses.contains(participant)) {
      throw Error(ErrorCode::kSchema, where + ": duplicate participant '" + participant + "'");
    }
    std::vector<std::optional<double>> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string cell = trim(fields[i]);
      if (cell.empty()) {
        row.emplace_back();
        continue;
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::kParse, where + ": '" + cell + "' is not a number");
      }
      if (v < table.scale.min_value || v > table.scale.max_value) {
        throw Error(ErrorCode::kInvariant, where + ": response " + cell + " outside " +
                                               std::to_string(table.scale.min_value) + "-" +
                                               std::to_string(table.scale.max_value));
      }
      row.emplace_back(v);
    }
    table.participants.push_back(participant);
    table.responses.emplace(participant, std::move(row));
  }
  return table;
}

SurveyTable load_survey_csv(const std::filesystem::path& path, SurveyScale scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_survey_csv(ss.str(), std::move(scale));
}

}  // namespace primmdebug::analytics
