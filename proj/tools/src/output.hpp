#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tpskit::cli {

// Bad flags or flag combinations; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hash_hex(std::uint64_t h);
std::string hash_bytes(const std::string& bytes);
std::string hash_file(const std::string& path);

// Collects every output of a run. Files are written to a temporary name in
// the target directory and renamed into place. In verify mode nothing
// touches the disk; contents are only hashed and compared with the hashes
// recorded in a manifest.
class OutputSink {
 public:
  void write(const std::string& path, const std::string& contents);
  // --stdout data: printed once the command succeeds.
  void write_stdout(const std::string& contents);
  void flush_stdout() const;

  const nlohmann::json& records() const noexcept { return records_; }

  void set_verify(bool on) noexcept { verify_ = on; }
  bool verify() const noexcept { return verify_; }

 private:
  nlohmann::json records_ = nlohmann::json::array();
  std::string stdout_;
  bool verify_ = false;
};

struct Manifest {
  std::string command;
  std::vector<std::string> argv;  // arguments after the program name
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string input_hash;  // empty for generated data
};

nlohmann::json manifest_json(const Manifest& m, const OutputSink& sink);

// Default manifest location for a primary output.
std::string manifest_path_for(const std::string& output);

// Serialised with two-space indentation and a trailing newline.
std::string dump(const nlohmann::json& j);

// RFC 4180 quoting: fields containing commas, quotes or newlines are quoted.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace tpskit::cli
