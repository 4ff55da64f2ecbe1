#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace steklov {

/// Shortest locale-independent rendering with 17 significant digits ("nan"/"inf" for non-finite).
std::string format_number(double value);

/// Shortest round-trip rendering, for labels and messages.
std::string format_label(double value);

/// Minimal ordered JSON emitter. Numbers are written with 17 significant digits,
/// non-finite numbers as null.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::size_t v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();
  JsonWriter& array(std::span<const double> values);

  template <class T>
  JsonWriter& field(std::string_view name, const T& v) {
    key(name);
    return value(v);
  }

  /// Document text, terminated by a newline.
  std::string str() const;

 private:
  void before_value();
  void append_string(std::string_view v);

  std::string out_;
  std::vector<bool> first_;  // one entry per open container
  bool after_key_ = false;
};

/// Writes to a temporary sibling and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace steklov
