#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace flatcusp {

// Flat key=value configuration with dotted keys, '#' comments and
// line-numbered diagnostics. All knobs of every command live here so a
// config hash pins a run exactly.
class Config {
 public:
  Config();  // defaults

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::int64_t get_int64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::string get_string(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);

  bool has(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  // Canonical serialization: sorted "key = value" lines.
  std::string serialize() const;

  // FNV-1a 64 over the canonical serialization, rendered as 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(const std::string& data);

}  // namespace flatcusp
