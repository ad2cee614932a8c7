#include "output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "tpskit/rng.hpp"

namespace tpskit::cli {

namespace fs = std::filesystem;

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hash_bytes(const std::string& bytes) { return hash_hex(fnv1a64(bytes)); }

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return hash_bytes(ss.str());
}

void OutputSink::write(const std::string& path, const std::string& contents) {
  records_.push_back({{"path", path}, {"hash", hash_bytes(contents)}, {"bytes", contents.size()}});
  if (verify_) return;

  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
  }
}

void OutputSink::write_stdout(const std::string& contents) {
  records_.push_back({{"path", "-"}, {"hash", hash_bytes(contents)}, {"bytes", contents.size()}});
  stdout_ += contents;
}

void OutputSink::flush_stdout() const {
  if (!verify_ && !stdout_.empty()) std::cout << stdout_ << std::flush;
}

nlohmann::json manifest_json(const Manifest& m, const OutputSink& sink) {
  return {{"command", m.command},
          {"argv", m.argv},
          {"config", m.config},
          {"seed", m.seed},
          {"input_hash", m.input_hash.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.input_hash)},
          {"outputs", sink.records()}};
}

std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      line += f;
      continue;
    }
    line += '"';
    for (char c : f) {
      if (c == '"') line += '"';
      line += c;
    }
    line += '"';
  }
  return line + "\n";
}

}  // namespace tpskit::cli
