#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "robin_plap_cli/config.hpp"

namespace robin_plap::cli {

struct Stage {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> values;
  std::string message;

  void set(const std::string& key, double v);
  void set(const std::string& key, long long v);
  void set(const std::string& key, int v) { set(key, static_cast<long long>(v)); }
  void set(const std::string& key, bool v);
  void set(const std::string& key, std::string v);
};

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<Stage> stages;
  std::vector<std::string> files;  ///< relative to the output directory

  bool all_pass() const;
};

/// Runs cfg.command, writing data files into cfg.out_dir. Numerical
/// failures are recorded as failed stages; a failed gating stage stops the
/// pipeline. Throws ConfigError for invalid configurations.
RunReport run(const ScenarioConfig& cfg);

/// Human-readable report including wall times.
void write_report_txt(std::ostream& out, const RunReport& report);
/// key=value lines; deterministic given config and seed.
void write_report_kv(std::ostream& out, const RunReport& report);

/// Raised when another process holds the output directory lock.
class LockBusyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Holds an exclusive lock on <dir>/.robin-plap.lock for its lifetime.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace robin_plap::cli
