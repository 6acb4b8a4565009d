#include "publist/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace publist::store {

namespace fs = std::filesystem;

SessionLock::SessionLock(const fs::path& dir) : path_(dir / ".lock") {
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) throw LockError("session " + dir.string() + " is locked by another process");
    throw LockError("cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  auto pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

SessionLock::~SessionLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void save_session(const Session& s, const fs::path& dir) {
  fs::create_directories(dir);
  json meta{{"session_id", s.session_id}, {"revision", s.revision}, {"sources", s.sources}, {"scored", s.scored}};
  write_file(dir / "session.json", meta.dump(2) + "\n");
  write_file(dir / "config.json", json(s.config).dump(2) + "\n");
  write_file(dir / "profile.json", json(s.input_profile).dump(2) + "\n");
  write_file(dir / "records.jsonl", to_jsonl(s.records));

  std::vector<CandidateAssignment> assignments;
  for (const auto& [id, a] : s.assignments) assignments.push_back(a);
  write_file(dir / "clusters.jsonl", s.scored ? to_jsonl(s.clusters) : std::string());
  write_file(dir / "assignments.jsonl", s.scored ? to_jsonl(assignments) : std::string());
  write_file(dir / "decisions.jsonl", to_jsonl(s.decisions));
  if (s.gold) write_file(dir / "gold.jsonl", to_jsonl(*s.gold));
  else if (fs::exists(dir / "gold.jsonl")) fs::remove(dir / "gold.jsonl");
}

bool is_session_dir(const fs::path& dir) { return fs::exists(dir / "session.json"); }

Session load_session(const fs::path& dir) {
  if (!is_session_dir(dir)) throw NotFoundError("no session at " + dir.string());
  Session s;
  const auto meta = json::parse(read_file(dir / "session.json"));
  s.session_id = meta.value("session_id", dir.filename().string());
  s.revision = meta.value("revision", std::uint64_t{0});
  s.sources = meta.value("sources", std::vector<SourceTag>{});
  const bool scored = meta.value("scored", false);
  s.config = json::parse(read_file(dir / "config.json")).get<Config>();
  s.input_profile = json::parse(read_file(dir / "profile.json")).get<ResearcherProfile>();
  for (const auto& j : parse_jsonl(read_file(dir / "records.jsonl"))) s.records.push_back(j.get<PublicationRecord>());
  if (fs::exists(dir / "decisions.jsonl"))
    for (const auto& j : parse_jsonl(read_file(dir / "decisions.jsonl"))) s.decisions.push_back(j.get<DecisionEntry>());
  if (fs::exists(dir / "gold.jsonl")) {
    s.gold.emplace();
    for (const auto& j : parse_jsonl(read_file(dir / "gold.jsonl"))) s.gold->push_back(j.get<PublicationRecord>());
  }

  if (scored) {
    replay(s);
    if (fs::exists(dir / "assignments.jsonl")) {
      std::vector<CandidateAssignment> current;
      for (const auto& [id, a] : s.assignments) current.push_back(a);
      if (read_file(dir / "assignments.jsonl") != to_jsonl(current))
        throw ValidationError("assignments.jsonl in " + dir.string() + " does not match a replay of the decision log");
    }
  } else if (!s.decisions.empty()) {
    throw ValidationError("decisions recorded for a session that was never run");
  }
  return s;
}

}  // namespace publist::store
