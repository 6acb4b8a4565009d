#pragma once

#include "publist/session.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

namespace httplib {
class Server;
}

namespace publist::service {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // names lowercased
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

struct Options {
  // Leaves decision timestamps empty so responses and files are reproducible.
  bool deterministic = false;
};

/// HTTP session service over file-backed sessions stored under `root`, one
/// directory per session in the CLI layout. All routes live under /api/v1.
class Service {
 public:
  explicit Service(std::filesystem::path root, Options options = {});

  Response handle(const Request& request);

  /// Registers every route on an httplib server.
  void mount(httplib::Server& server);

 private:
  struct Entry {
    std::shared_mutex mutex;
    Session session;
  };

  std::shared_ptr<Entry> find(const std::string& id);
  std::string next_session_id();
  void persist(const Session& s);

  Response create_session(const Request& request);
  Response get_session(Entry& entry);
  Response add_source(Entry& entry, const Request& request);
  Response run(Entry& entry, const Request& request);
  Response candidates(Entry& entry, const Request& request);
  Response decide(Entry& entry, const Request& request);
  Response set_gold(Entry& entry, const Request& request);
  Response report(Entry& entry);
  Response export_list(Entry& entry, const Request& request);

  std::filesystem::path root_;
  Options options_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

/// Blocks serving `service` on host:port until the server stops.
bool serve(Service& service, const std::string& host, int port);

std::string utc_timestamp();

}  // namespace publist::service
