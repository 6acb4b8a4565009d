#include "publist/service.hpp"

#include "publist/disambiguate.hpp"
#include "publist/report.hpp"
#include "publist/store.hpp"
#include "publist/text.hpp"

#include "httplib.h"

#include <algorithm>
#include <chrono>
#include <ctime>

namespace publist::service {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kPrefix = "/api/v1";

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

Response json_response(int status, const json& body) {
  Response r;
  r.status = status;
  r.body = body.dump(2) + "\n";
  return r;
}

Response error_response(int status, const std::string& message) { return json_response(status, json{{"error", message}}); }

json parse_body(const Request& req) {
  if (text::trim(req.body).empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw HttpError(400, std::string("malformed JSON body: ") + e.what());
  }
}

void tag_revision(Response& r, const Session& s) { r.headers["ETag"] = "\"" + std::to_string(s.revision) + "\""; }

// If-Match carries the revision the client last saw; a mismatch is a conflict.
void check_revision(const Request& req, const Session& s) {
  auto it = req.headers.find("if-match");
  if (it == req.headers.end()) return;
  std::string v(text::trim(it->second));
  if (v == "*") return;
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  if (v != std::to_string(s.revision))
    throw HttpError(409, "revision conflict: session is at revision " + std::to_string(s.revision) + ", request expected " + v);
}

void require_run(const Session& s) {
  if (!s.scored) throw HttpError(409, "session has not been run");
}

ingest::Field parse_field(const std::string& name) {
  static const std::map<std::string, ingest::Field> fields = {
      {"title", ingest::Field::title},         {"authors", ingest::Field::authors},
      {"year", ingest::Field::year},           {"abstract", ingest::Field::abstract},
      {"venue", ingest::Field::venue},         {"doi", ingest::Field::doi},
      {"keywords", ingest::Field::keywords},   {"addresses", ingest::Field::addresses},
      {"doc_type", ingest::Field::doc_type},   {"cited_refs", ingest::Field::cited_refs},
      {"native_id", ingest::Field::native_id}};
  auto it = fields.find(name);
  if (it == fields.end()) throw HttpError(422, "unknown record field '" + name + "' in column_map");
  return it->second;
}

ingest::ParseResult parse_payload(const json& body, const SourceTag& source) {
  const auto format_name = body.value("format", std::string());
  const auto format = ingest::parse_format(format_name);
  if (!format) throw HttpError(422, "unknown format '" + format_name + "'");
  const auto payload = body.value("payload", std::string());
  if (body.contains("column_map") && *format != ingest::Format::ris) {
    ingest::ColumnMap columns;
    for (const auto& [header, field] : body.at("column_map").items()) columns[header] = parse_field(field.get<std::string>());
    return ingest::parse_table(payload, columns, source, *format == ingest::Format::tsv ? '\t' : ',');
  }
  return ingest::parse(payload, *format, source);
}

json candidate_item(const Session& s, const CandidateAssignment& a) {
  json item = a;
  const auto& r = s.canonical.at(a.record_id);
  std::vector<std::string> authors;
  for (const auto& n : r.authors) authors.push_back(n.raw.empty() ? ingest::render_name(n) : n.raw);
  item["record"] = json{{"title", r.title},
                        {"year", r.year},
                        {"venue", r.venue ? json(*r.venue) : json(nullptr)},
                        {"doi", r.doi ? json(*r.doi) : json(nullptr)},
                        {"authors", authors},
                        {"addresses", r.addresses}};
  return item;
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Service::Service(fs::path root, Options options) : root_(std::move(root)), options_(options) {
  fs::create_directories(root_);
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  if (id.empty() || id.find('/') != std::string::npos || id.find("..") != std::string::npos) return nullptr;
  const auto dir = root_ / id;
  if (!store::is_session_dir(dir)) return nullptr;
  auto entry = std::make_shared<Entry>();
  entry->session = store::load_session(dir);
  entry->session.session_id = id;
  sessions_[id] = entry;
  return entry;
}

std::string Service::next_session_id() {
  for (std::size_t n = sessions_.size() + 1;; ++n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%06zu", n);
    if (!sessions_.count(buf) && !fs::exists(root_ / buf)) return buf;
  }
}

void Service::persist(const Session& s) {
  const auto dir = root_ / s.session_id;
  fs::create_directories(dir);
  store::SessionLock lock(dir);
  store::save_session(s, dir);
}

Response Service::handle(const Request& req) {
  try {
    std::string_view path = req.path;
    if (path.substr(0, kPrefix.size()) != kPrefix) return error_response(404, "unknown route");
    path.remove_prefix(kPrefix.size());
    std::vector<std::string> parts;
    for (auto& p : text::split(path, "/"))
      if (!p.empty()) parts.push_back(p);
    if (parts.empty() || parts[0] != "sessions") return error_response(404, "unknown route");

    if (parts.size() == 1) {
      if (req.method == "POST") return create_session(req);
      return error_response(405, "method not allowed");
    }
    auto entry = find(parts[1]);
    if (!entry) return error_response(404, "unknown session " + parts[1]);

    const std::string action = parts.size() > 2 ? parts[2] : "";
    if (parts.size() > 3) return error_response(404, "unknown route");
    if (req.method == "GET") {
      if (action.empty()) return get_session(*entry);
      if (action == "candidates") return candidates(*entry, req);
      if (action == "report") return report(*entry);
      if (action == "export") return export_list(*entry, req);
    } else if (req.method == "POST") {
      if (action == "sources") return add_source(*entry, req);
      if (action == "run") return run(*entry, req);
      if (action == "decisions") return decide(*entry, req);
      if (action == "gold") return set_gold(*entry, req);
    }
    return error_response(404, "unknown route");
  } catch (const HttpError& e) {
    return error_response(e.status(), e.what());
  } catch (const NotFoundError& e) {
    return error_response(404, e.what());
  } catch (const ConflictError& e) {
    return error_response(409, e.what());
  } catch (const ValidationError& e) {
    return error_response(422, e.what());
  } catch (const json::exception& e) {
    return error_response(422, std::string("bad request body: ") + e.what());
  } catch (const store::LockError& e) {
    return error_response(503, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

Response Service::create_session(const Request& req) {
  const auto body = parse_body(req);
  Session s;
  s.config = body.contains("config") ? body.at("config").get<Config>() : Config{};
  s.input_profile = body.at("profile").get<ResearcherProfile>();
  std::vector<std::string> problems;
  for (auto& v : validate_config(s.config)) problems.push_back("config: " + v);
  for (auto& v : validate_profile(s.input_profile)) problems.push_back("profile: " + v);
  if (body.contains("sources")) {
    auto sources = body.at("sources").get<std::vector<SourceTag>>();
    for (auto& v : validate_sources(sources)) problems.push_back("sources: " + v);
    s.sources = std::move(sources);
  }
  if (!problems.empty()) throw ValidationError(text::join(problems, "; "));

  std::lock_guard lock(sessions_mutex_);
  s.session_id = next_session_id();
  persist(s);
  auto entry = std::make_shared<Entry>();
  entry->session = s;
  sessions_[s.session_id] = entry;
  auto r = json_response(201, json{{"session_id", s.session_id}, {"revision", s.revision}});
  tag_revision(r, s);
  return r;
}

Response Service::get_session(Entry& entry) {
  std::shared_lock lock(entry.mutex);
  const auto& s = entry.session;
  json body{{"session_id", s.session_id},
            {"revision", s.revision},
            {"sources", s.sources},
            {"records", s.records.size()},
            {"scored", s.scored},
            {"decisions", s.decisions.size()},
            {"config", s.config},
            {"profile", s.input_profile}};
  if (s.scored) body["summary"] = run_summary(s);
  auto r = json_response(200, body);
  tag_revision(r, s);
  return r;
}

Response Service::add_source(Entry& entry, const Request& req) {
  const auto body = parse_body(req);
  std::unique_lock lock(entry.mutex);
  check_revision(req, entry.session);
  Session next = entry.session;
  const auto tag = body.at("source_tag").get<SourceTag>();
  next.register_source(tag);
  auto parsed = parse_payload(body, tag);
  for (auto& r : parsed.records) next.records.push_back(std::move(r));
  ++next.revision;
  persist(next);
  entry.session = std::move(next);
  json out = parsed.report;
  out["revision"] = entry.session.revision;
  auto r = json_response(200, out);
  tag_revision(r, entry.session);
  return r;
}

Response Service::run(Entry& entry, const Request& req) {
  std::unique_lock lock(entry.mutex);
  check_revision(req, entry.session);
  if (entry.session.sources.empty()) throw HttpError(409, "no sources ingested");
  Session next = entry.session;
  run_session(next);
  ++next.revision;
  persist(next);
  entry.session = std::move(next);
  json out = run_summary(entry.session);
  out["revision"] = entry.session.revision;
  auto r = json_response(200, out);
  tag_revision(r, entry.session);
  return r;
}

Response Service::candidates(Entry& entry, const Request& req) {
  std::shared_lock lock(entry.mutex);
  const auto& s = entry.session;
  require_run(s);
  std::optional<Tier> filter;
  if (auto it = req.query.find("tier"); it != req.query.end() && !it->second.empty()) {
    filter = parse_tier(it->second);
    if (!filter) throw HttpError(422, "unknown tier '" + it->second + "'");
  }
  std::vector<const CandidateAssignment*> items;
  for (const auto& [id, a] : s.assignments)
    if (!filter || a.tier == *filter) items.push_back(&a);
  std::stable_sort(items.begin(), items.end(), [](const CandidateAssignment* a, const CandidateAssignment* b) {
    if (a->combined != b->combined) return a->combined > b->combined;
    return a->record_id < b->record_id;
  });
  json list = json::array();
  for (const auto* a : items) list.push_back(candidate_item(s, *a));
  auto r = json_response(200, json{{"revision", s.revision}, {"candidates", list}});
  tag_revision(r, s);
  return r;
}

Response Service::decide(Entry& entry, const Request& req) {
  const auto body = parse_body(req);
  const auto record_id = body.at("record_id").get<std::string>();
  const auto decision_name = body.at("decision").get<std::string>();
  const auto decision = parse_decision(decision_name);
  if (!decision) throw HttpError(422, "decision must be accept or reject, got '" + decision_name + "'");

  std::unique_lock lock(entry.mutex);
  check_revision(req, entry.session);
  require_run(entry.session);
  Session next = entry.session;
  auto delta = disambiguate::apply_decision(next, record_id, *decision, body.value("note", std::string()),
                                            body.value("override", false),
                                            options_.deterministic ? std::string() : utc_timestamp());
  ++next.revision;
  persist(next);
  entry.session = std::move(next);
  auto r = json_response(200, json{{"revision", entry.session.revision}, {"delta", delta}});
  tag_revision(r, entry.session);
  return r;
}

Response Service::set_gold(Entry& entry, const Request& req) {
  const auto body = parse_body(req);
  std::unique_lock lock(entry.mutex);
  check_revision(req, entry.session);
  Session next = entry.session;
  SourceTag gold_tag{"gold", "gold list", 0};
  auto parsed = parse_payload(body, gold_tag);
  next.gold = std::move(parsed.records);
  ++next.revision;
  persist(next);
  entry.session = std::move(next);
  json out = parsed.report;
  out["revision"] = entry.session.revision;
  auto r = json_response(200, out);
  tag_revision(r, entry.session);
  return r;
}

Response Service::report(Entry& entry) {
  std::shared_lock lock(entry.mutex);
  const auto& s = entry.session;
  require_run(s);
  std::optional<std::vector<std::string>> gold;
  if (s.gold) gold = report::match_gold(*s.gold, s);
  const auto comparison =
      report::compare_methods(report::run_method_cluster(s), report::run_method_address(s), gold, s);
  auto r = json_response(200, json{{"revision", s.revision},
                                   {"comparison", report::to_json(comparison)},
                                   {"stats", report::descriptive_stats(s)}});
  tag_revision(r, s);
  return r;
}

Response Service::export_list(Entry& entry, const Request& req) {
  std::shared_lock lock(entry.mutex);
  const auto& s = entry.session;
  require_run(s);
  auto it = req.query.find("format");
  const std::string name = it == req.query.end() ? "json" : it->second;
  auto format = report::parse_export_format(name);
  if (!format) throw HttpError(422, "unknown export format '" + name + "'");
  Response r;
  r.content_type = std::string(report::content_type(*format));
  r.body = report::export_list(s, *format);
  tag_revision(r, s);
  return r;
}

void Service::mount(httplib::Server& server) {
  auto forward = [this](const httplib::Request& in, httplib::Response& out) {
    Request req;
    req.method = in.method;
    req.path = in.path;
    req.body = in.body;
    for (const auto& [k, v] : in.params) req.query.emplace(k, v);
    for (const auto& [k, v] : in.headers) req.headers.emplace(text::fold_lower(k), v);
    auto res = handle(req);
    out.status = res.status;
    for (const auto& [k, v] : res.headers) out.set_header(k, v);
    out.set_content(res.body, res.content_type);
  };
  server.Get(R"(/api/v1/.*)", forward);
  server.Post(R"(/api/v1/.*)", forward);
}

bool serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  return server.listen(host, port);
}

}  // namespace publist::service
