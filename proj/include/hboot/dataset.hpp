#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hboot/errors.hpp"
#include "hboot/format.hpp"
#include "hboot/indices.hpp"

namespace hboot {

enum class DatasetKind { h_values, citation_profiles };

// Everything a run needs: per-field index samples (with the researcher ids
// that produced each value, kept aligned so files round-trip), optional
// per-field norms, and optional raw citation profiles.
struct Dataset {
  std::map<std::string, IndexSample> samples;
  std::map<std::string, std::vector<std::string>> researcher_ids;
  std::map<std::string, FieldNorms> norms;
  std::string reference_field;
  std::vector<CitationProfile> profiles;
};

namespace detail {

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[nodiscard]] inline std::string location(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no) + ": ";
}

[[nodiscard]] inline double parse_double(std::string_view token, const std::string& where) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument(where + "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

[[nodiscard]] inline std::int64_t parse_int(std::string_view token, const std::string& where) {
  std::int64_t value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument(where + "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

[[nodiscard]] inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw io_error("read failure on '" + path + "'");
  return std::move(buffer).str();
}

// Lines with their 1-based numbers, trailing \r stripped, blanks dropped.
[[nodiscard]] inline std::vector<std::pair<std::size_t, std::string_view>> content_lines(
    std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find('\n', start);
    std::string_view line = (pos == std::string_view::npos)
                                ? text.substr(start)
                                : text.substr(start, pos - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.emplace_back(line_no, line);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[nodiscard]] inline IndexKind kind_from_column(std::string_view column, const std::string& where) {
  if (column == "h_value") return IndexKind::raw_h;
  if (column == "normalized_h") return IndexKind::normalized_h;
  if (column == "n_index") return IndexKind::n_index;
  if (column == "generalized_h") return IndexKind::generalized_h;
  throw std::invalid_argument(where + "unknown value column '" + std::string(column) +
                              "' (expected h_value, normalized_h, n_index or generalized_h)");
}

[[nodiscard]] inline IndexKind kind_from_name(std::string_view name, const std::string& where) {
  if (name == "raw_h") return IndexKind::raw_h;
  if (name == "normalized_h") return IndexKind::normalized_h;
  if (name == "n_index") return IndexKind::n_index;
  if (name == "generalized_h") return IndexKind::generalized_h;
  throw std::invalid_argument(where + "unknown sample kind '" + std::string(name) + "'");
}

inline void append_value(Dataset& ds, const std::string& field, const std::string& researcher,
                         double value, IndexKind kind) {
  auto [it, inserted] = ds.samples.try_emplace(field);
  if (inserted) {
    it->second.field_id = field;
    it->second.kind = kind;
  }
  it->second.values.push_back(value);
  ds.researcher_ids[field].push_back(researcher);
}

inline Dataset load_dataset_json(const std::string& path);

}  // namespace detail

// Guesses the CSV row format from the header (JSON files carry their own
// structure, so the answer does not matter for them).
[[nodiscard]] inline DatasetKind detect_dataset_kind(const std::string& path) {
  if (std::filesystem::path(path).extension() == ".json") return DatasetKind::h_values;
  const std::string text = detail::read_file(path);
  for (const auto& [line_no, line] : detail::content_lines(text)) {
    if (line.front() == '#') continue;
    if (line.rfind("researcher_id,", 0) == 0) return DatasetKind::citation_profiles;
    return DatasetKind::h_values;
  }
  return DatasetKind::h_values;
}

// Loads a dataset from a CSV file in one of the two row formats
// (h-values: field_id,researcher_id,h_value; profiles:
// researcher_id,field_id,c1;c2;...;ck), or from a dataset JSON file when
// the path ends in .json (the JSON carries its own kind; `kind` is ignored).
// Profile rows also populate per-field h-index samples.
[[nodiscard]] inline Dataset load_dataset(const std::string& path, DatasetKind kind) {
  if (std::filesystem::path(path).extension() == ".json") {
    return detail::load_dataset_json(path);
  }
  const std::string text = detail::read_file(path);
  const auto lines = detail::content_lines(text);
  if (lines.empty()) {
    throw std::invalid_argument(path + ": file is empty");
  }

  Dataset ds;
  bool header_seen = false;
  IndexKind value_kind = IndexKind::raw_h;
  for (const auto& [line_no, line] : lines) {
    const std::string where = detail::location(path, line_no);
    if (line.front() == '#') continue;  // comment
    const auto fields = detail::split(line, ',');
    if (!header_seen) {
      if (kind == DatasetKind::h_values) {
        if (fields.size() != 3 || fields[0] != "field_id" || fields[1] != "researcher_id") {
          throw std::invalid_argument(where +
                                      "expected header 'field_id,researcher_id,<value column>'");
        }
        value_kind = detail::kind_from_column(fields[2], where);
      } else {
        if (fields.size() != 3 || fields[0] != "researcher_id" || fields[1] != "field_id" ||
            fields[2] != "citations") {
          throw std::invalid_argument(where +
                                      "expected header 'researcher_id,field_id,citations'");
        }
      }
      header_seen = true;
      continue;
    }

    if (fields.size() != 3) {
      throw std::invalid_argument(where + "expected 3 comma-separated fields, got " +
                                  std::to_string(fields.size()));
    }
    if (kind == DatasetKind::h_values) {
      const std::string field(fields[0]);
      const std::string researcher(fields[1]);
      if (field.empty() || researcher.empty()) {
        throw std::invalid_argument(where + "field_id and researcher_id must be non-empty");
      }
      double value = 0.0;
      if (value_kind == IndexKind::raw_h) {
        const std::int64_t h = detail::parse_int(fields[2], where);
        if (h < 0) throw std::invalid_argument(where + "h_value must be non-negative");
        value = static_cast<double>(h);
      } else {
        value = detail::parse_double(fields[2], where);
        if (!(value >= 0.0)) {
          throw std::invalid_argument(where + "index value must be non-negative");
        }
      }
      detail::append_value(ds, field, researcher, value, value_kind);
    } else {
      CitationProfile profile;
      profile.researcher_id = std::string(fields[0]);
      profile.field_id = std::string(fields[1]);
      if (profile.researcher_id.empty() || profile.field_id.empty()) {
        throw std::invalid_argument(where + "researcher_id and field_id must be non-empty");
      }
      if (!fields[2].empty()) {
        for (std::string_view token : detail::split(fields[2], ';')) {
          const std::int64_t c = detail::parse_int(token, where);
          if (c < 0) {
            throw std::invalid_argument(where + "negative citation count " + std::to_string(c));
          }
          profile.citations.push_back(c);
        }
      }
      const int h = h_index(profile);
      detail::append_value(ds, profile.field_id, profile.researcher_id,
                           static_cast<double>(h), IndexKind::raw_h);
      ds.profiles.push_back(std::move(profile));
    }
  }
  if (!header_seen || ds.samples.empty()) {
    throw std::invalid_argument(path + ": no data rows found");
  }
  for (const auto& [field, sample] : ds.samples) validate_sample(sample);
  return ds;
}

// Loads the norms CSV (field_id,chi,c0,n0,journal_h_max plus one
// '#reference,<field_id>' row) and attaches it to the dataset. Every norms
// field must exist in the dataset, and the reference declaration fixes
// chi_ref for all entries.
inline void attach_norms(Dataset& ds, const std::string& path) {
  const std::string text = detail::read_file(path);
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw std::invalid_argument(path + ": file is empty");

  std::map<std::string, FieldNorms> norms;
  std::string reference;
  bool header_seen = false;
  for (const auto& [line_no, line] : lines) {
    const std::string where = detail::location(path, line_no);
    const auto fields = detail::split(line, ',');
    if (line.rfind("#reference", 0) == 0) {
      if (fields.size() != 2 || fields[1].empty()) {
        throw std::invalid_argument(where + "expected '#reference,<field_id>'");
      }
      reference = std::string(fields[1]);
      continue;
    }
    if (line.front() == '#') continue;
    if (!header_seen) {
      if (fields.size() != 5 || fields[0] != "field_id") {
        throw std::invalid_argument(where +
                                    "expected header 'field_id,chi,c0,n0,journal_h_max'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw std::invalid_argument(where + "expected 5 comma-separated fields, got " +
                                  std::to_string(fields.size()));
    }
    FieldNorms n;
    n.field_id = std::string(fields[0]);
    n.chi = detail::parse_double(fields[1], where);
    n.c0 = detail::parse_double(fields[2], where);
    n.n0 = detail::parse_double(fields[3], where);
    n.journal_h_max = static_cast<int>(detail::parse_int(fields[4], where));
    if (!norms.emplace(n.field_id, n).second) {
      throw std::invalid_argument(where + "duplicate norms for field '" + n.field_id + "'");
    }
  }
  if (reference.empty()) {
    throw std::invalid_argument(path + ": missing '#reference,<field_id>' declaration");
  }
  const auto ref_it = norms.find(reference);
  if (ref_it == norms.end()) {
    throw std::invalid_argument(path + ": reference field '" + reference +
                                "' has no norms row");
  }
  const double chi_ref = ref_it->second.chi;
  for (auto& [field, n] : norms) {
    n.chi_ref = chi_ref;
    validate_norms(n);
    if (!ds.samples.count(field)) {
      throw std::invalid_argument(path + ": norms reference unknown field '" + field + "'");
    }
  }
  ds.norms = std::move(norms);
  ds.reference_field = reference;
}

namespace detail {

[[nodiscard]] inline std::string_view sample_column_name(IndexKind kind) {
  switch (kind) {
    case IndexKind::raw_h: return "h_value";
    case IndexKind::normalized_h: return "normalized_h";
    case IndexKind::n_index: return "n_index";
    case IndexKind::generalized_h: return "generalized_h";
  }
  return "h_value";
}

[[nodiscard]] inline std::string researcher_label(const Dataset& ds, const std::string& field,
                                                  std::size_t index) {
  const auto it = ds.researcher_ids.find(field);
  if (it != ds.researcher_ids.end() && index < it->second.size()) return it->second[index];
  char buf[16];
  std::snprintf(buf, sizeof(buf), "r%03zu", index + 1);
  return buf;
}

[[nodiscard]] inline std::string sample_value_text(double v, IndexKind kind) {
  if (kind == IndexKind::raw_h) {
    return std::to_string(static_cast<long long>(v));
  }
  return format_shortest(v);
}

inline Dataset load_dataset_json(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": invalid JSON: " + e.what());
  }
  Dataset ds;
  try {
    for (const auto& s : doc.at("samples")) {
      const std::string field = s.at("field_id").get<std::string>();
      IndexSample sample;
      sample.field_id = field;
      sample.kind = kind_from_name(s.at("kind").get<std::string>(), path + ": ");
      sample.values = s.at("values").get<std::vector<double>>();
      std::vector<std::string> ids;
      if (s.contains("researcher_ids")) {
        ids = s.at("researcher_ids").get<std::vector<std::string>>();
        if (ids.size() != sample.values.size()) {
          throw std::invalid_argument(path + ": researcher_ids/values length mismatch for '" +
                                      field + "'");
        }
      }
      validate_sample(sample);
      if (!ds.samples.emplace(field, std::move(sample)).second) {
        throw std::invalid_argument(path + ": duplicate field '" + field + "'");
      }
      if (!ids.empty()) ds.researcher_ids.emplace(field, std::move(ids));
    }
    if (doc.contains("profiles")) {
      for (const auto& p : doc.at("profiles")) {
        CitationProfile profile;
        profile.researcher_id = p.at("researcher_id").get<std::string>();
        profile.field_id = p.at("field_id").get<std::string>();
        profile.citations = p.at("citations").get<std::vector<std::int64_t>>();
        validate_profile(profile);
        ds.profiles.push_back(std::move(profile));
      }
    }
    if (doc.contains("norms")) {
      const auto& norms = doc.at("norms");
      ds.reference_field = norms.at("reference_field").get<std::string>();
      for (const auto& f : norms.at("fields")) {
        FieldNorms n;
        n.field_id = f.at("field_id").get<std::string>();
        n.chi = f.at("chi").get<double>();
        n.chi_ref = f.at("chi_ref").get<double>();
        n.c0 = f.at("c0").get<double>();
        n.n0 = f.at("n0").get<double>();
        n.journal_h_max = f.at("journal_h_max").get<int>();
        validate_norms(n);
        if (!ds.samples.count(n.field_id)) {
          throw std::invalid_argument(path + ": norms reference unknown field '" + n.field_id +
                                      "'");
        }
        ds.norms.emplace(n.field_id, std::move(n));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": malformed dataset JSON: " + e.what());
  }
  if (ds.samples.empty()) throw std::invalid_argument(path + ": no samples");
  return ds;
}

}  // namespace detail

// Sample CSV (the h-values row format, with the value column named after
// the sample kind). All samples must share one kind.
[[nodiscard]] inline std::string serialize_dataset_csv(const Dataset& ds) {
  if (ds.samples.empty()) throw std::invalid_argument("serialize_dataset_csv: no samples");
  const IndexKind kind = ds.samples.begin()->second.kind;
  for (const auto& [field, sample] : ds.samples) {
    if (sample.kind != kind) {
      throw std::invalid_argument("serialize_dataset_csv: mixed sample kinds");
    }
  }
  std::string out = "field_id,researcher_id," + std::string(detail::sample_column_name(kind)) +
                    "\n";
  for (const auto& [field, sample] : ds.samples) {
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
      out += field;
      out += ',';
      out += detail::researcher_label(ds, field, i);
      out += ',';
      out += detail::sample_value_text(sample.values[i], kind);
      out += '\n';
    }
  }
  return out;
}

[[nodiscard]] inline std::string serialize_dataset_json(const Dataset& ds) {
  if (ds.samples.empty()) throw std::invalid_argument("serialize_dataset_json: no samples");
  nlohmann::json doc;
  doc["samples"] = nlohmann::json::array();
  for (const auto& [field, sample] : ds.samples) {
    nlohmann::json s;
    s["field_id"] = field;
    s["kind"] = std::string(index_kind_name(sample.kind));
    s["values"] = sample.values;
    nlohmann::json ids = nlohmann::json::array();
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
      ids.push_back(detail::researcher_label(ds, field, i));
    }
    s["researcher_ids"] = std::move(ids);
    doc["samples"].push_back(std::move(s));
  }
  if (!ds.profiles.empty()) {
    doc["profiles"] = nlohmann::json::array();
    for (const CitationProfile& p : ds.profiles) {
      doc["profiles"].push_back({{"researcher_id", p.researcher_id},
                                 {"field_id", p.field_id},
                                 {"citations", p.citations}});
    }
  }
  if (!ds.norms.empty()) {
    nlohmann::json norms;
    norms["reference_field"] = ds.reference_field;
    norms["fields"] = nlohmann::json::array();
    for (const auto& [field, n] : ds.norms) {
      norms["fields"].push_back({{"field_id", n.field_id},
                                 {"chi", n.chi},
                                 {"chi_ref", n.chi_ref},
                                 {"c0", n.c0},
                                 {"n0", n.n0},
                                 {"journal_h_max", n.journal_h_max}});
    }
    doc["norms"] = std::move(norms);
  }
  return doc.dump(2) + "\n";
}

// Writes through a temporary file and renames, so a failed run never
// leaves a partial output behind.
inline void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw io_error("write failure on '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw io_error("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

inline void save_dataset(const Dataset& ds, const std::string& path, bool as_json) {
  write_file_atomic(path, as_json ? serialize_dataset_json(ds) : serialize_dataset_csv(ds));
}

}  // namespace hboot
