#pragma once

// Verification suites behind `lpuhf verify`. Each suite returns one record
// per check; records are ordered and contain no timings, so a report is
// byte-stable for a fixed seed and tool version.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace lpuhf::verify {

using nlohmann::json;

enum class Status { pass, fail, skip };
std::string to_string(Status s);

struct Record {
  std::string id;
  std::string paper_ref;  // short description of the identity checked, or "plumbing"
  Status status = Status::pass;
  json measured = json::object();
  json tolerance = json::object();
};

struct Report {
  std::string tool_version;
  std::string input_digest;
  std::uint64_t seed = 0;
  std::vector<std::string> suites;
  std::vector<Record> records;

  std::size_t count(Status s) const;
  bool passed() const { return count(Status::fail) == 0; }
};

std::string tool_version();

/// Suite names in run order, without the "all" and "none" selectors.
const std::vector<std::string>& suite_names();

/// "all", "none", a single name or a comma-separated list. Throws InputError
/// on unknown names.
std::vector<std::string> resolve_suites(const std::string& selector);

std::vector<Record> run_suite(const std::string& name, std::uint64_t seed);
Report run(const std::string& selector, std::uint64_t seed);

json to_json(const Record& r);
json to_json(const Report& r);
std::string summary_line(const Report& r);

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(const std::string& text);

}  // namespace lpuhf::verify
