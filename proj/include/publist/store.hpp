#pragma once

#include "publist/session.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace publist::store {

class LockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Holds `<dir>/.lock` for its lifetime; throws LockError when another holder exists.
class SessionLock {
 public:
  explicit SessionLock(const std::filesystem::path& dir);
  ~SessionLock();
  SessionLock(const SessionLock&) = delete;
  SessionLock& operator=(const SessionLock&) = delete;

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Layout: session.json, config.json, profile.json and
/// {records,clusters,assignments,decisions}.jsonl (plus gold.jsonl when set).
void save_session(const Session& s, const std::filesystem::path& dir);

/// Loads a session directory. Scored sessions are rebuilt by replaying the
/// decision log; a stored assignments file that disagrees with the replay
/// raises ValidationError.
Session load_session(const std::filesystem::path& dir);

bool is_session_dir(const std::filesystem::path& dir);

}  // namespace publist::store
