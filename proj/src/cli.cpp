#include "publist/cli.hpp"

#include "publist/disambiguate.hpp"
#include "publist/ingest.hpp"
#include "publist/json_io.hpp"
#include "publist/report.hpp"
#include "publist/service.hpp"
#include "publist/session.hpp"
#include "publist/store.hpp"
#include "publist/text.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>

namespace publist::cli {

namespace fs = std::filesystem;

namespace {

// Bad paths, formats and flag combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("cannot read " + path);
  return store::read_file(path);
}

ingest::Format format_for(const std::string& path, const std::string& forced) {
  auto format = forced.empty() ? ingest::format_from_path(path) : ingest::parse_format(forced);
  if (!format) throw UsageError("unknown format for " + path + (forced.empty() ? "" : " ('" + forced + "')"));
  return *format;
}

bool is_jsonl(const std::string& path) { return fs::path(path).extension() == ".jsonl"; }

std::vector<PublicationRecord> read_jsonl_records(const std::string& path) {
  std::vector<PublicationRecord> records;
  for (const auto& j : parse_jsonl(read_input(path))) records.push_back(j.get<PublicationRecord>());
  return records;
}

void print_report(const ingest::IngestReport& report, std::ostream& out, std::ostream& err) {
  out << report.source_id << ": parsed " << report.records_parsed << ", rejected " << report.records_rejected << "\n";
  for (const auto& v : report.violations) err << "  " << json(v).dump() << "\n";
}

Session load_existing(const std::string& dir) {
  if (!store::is_session_dir(dir)) throw UsageError("no session at " + dir);
  auto s = store::load_session(dir);
  s.session_id = fs::path(dir).filename().string();
  return s;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  store::write_file(path, content);
}

std::vector<std::string> gold_ids(const std::string& path, const Session& s) {
  if (fs::path(path).extension() == ".txt") {
    // One record id or DOI per line.
    std::vector<std::string> ids;
    for (const auto& raw : text::split(read_input(path), "\n")) {
      std::string line(text::trim(raw));
      if (line.empty() || line[0] == '#') continue;
      if (auto id = resolve_record_id(s, line)) {
        ids.push_back(*id);
        continue;
      }
      PublicationRecord g;
      g.title = line;
      g.doi = normalize_doi(line);
      auto matched = report::match_gold(std::span(&g, 1), s);
      ids.push_back(matched.front().rfind("unmatched: ", 0) == 0 ? "unmatched: " + line : matched.front());
    }
    return ids;
  }
  std::vector<PublicationRecord> gold;
  if (is_jsonl(path)) {
    gold = read_jsonl_records(path);
  } else {
    auto parsed = ingest::parse(read_input(path), format_for(path, ""), SourceTag{"gold", "gold list", 0});
    gold = std::move(parsed.records);
  }
  return report::match_gold(gold, s);
}

std::set<std::string> to_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Publication list construction for a single researcher"};
  app.require_subcommand(1);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse bibliographic exports into a records file");
  std::vector<std::string> ingest_paths;
  SourceTag ingest_source;
  std::string ingest_format, ingest_out = "records.jsonl";
  ingest_cmd->add_option("paths", ingest_paths, "RIS, CSV or TSV files")->required();
  ingest_cmd->add_option("--source-id", ingest_source.source_id, "Source identifier")->required();
  ingest_cmd->add_option("--source-name", ingest_source.source_name, "Human-readable source name");
  ingest_cmd->add_option("--trust", ingest_source.trust_rank, "Trust rank, 0 is most trusted")->required();
  ingest_cmd->add_option("--format", ingest_format, "ris, csv or tsv; inferred from the extension otherwise");
  ingest_cmd->add_option("--out", ingest_out, "Output records file");

  // run
  auto* run_cmd = app.add_subcommand("run", "Deduplicate and score records into a session directory");
  std::vector<std::string> run_records;
  std::string run_profile, run_trajectory, run_config, run_words, run_session_dir, run_format;
  SourceTag run_source;
  bool run_deterministic = false;
  run_cmd->add_option("--records", run_records, "Records files (.jsonl, or raw exports with --source-id)");
  run_cmd->add_option("--profile", run_profile, "Researcher profile JSON")->required();
  run_cmd->add_option("--trajectory", run_trajectory, "Trajectory file replacing the profile trajectory");
  run_cmd->add_option("--config", run_config, "Configuration JSON");
  run_cmd->add_option("--function-words", run_words, "Function word list, one per line");
  run_cmd->add_option("--session", run_session_dir, "Session directory")->required();
  run_cmd->add_option("--source-id", run_source.source_id, "Source identifier for raw exports");
  run_cmd->add_option("--source-name", run_source.source_name, "Source name for raw exports");
  run_cmd->add_option("--trust", run_source.trust_rank, "Trust rank for raw exports");
  run_cmd->add_option("--format", run_format, "Format of raw exports");
  run_cmd->add_flag("--deterministic", run_deterministic, "Omit wall-clock timestamps");

  // decide
  auto* decide_cmd = app.add_subcommand("decide", "Record a curator decision and rescore");
  std::string decide_session, decide_record, decide_decision, decide_note;
  bool decide_override = false, decide_deterministic = false;
  decide_cmd->add_option("--session", decide_session, "Session directory")->required();
  decide_cmd->add_option("--record", decide_record, "Record id")->required();
  decide_cmd->add_option("--decision", decide_decision, "accept or reject")->required();
  decide_cmd->add_option("--note", decide_note, "Free-text note");
  decide_cmd->add_flag("--override", decide_override, "Allow overriding an automatic tier");
  decide_cmd->add_flag("--deterministic", decide_deterministic, "Omit wall-clock timestamps");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Compare the cluster and address methods");
  std::string compare_session, compare_gold, compare_out;
  std::vector<std::string> compare_sources_a, compare_sources_b;
  bool compare_deterministic = false;
  compare_cmd->add_option("--session", compare_session, "Session directory")->required();
  compare_cmd->add_option("--gold", compare_gold, "External publication list (ris, csv, tsv, jsonl or txt)");
  compare_cmd->add_option("--out", compare_out, "Write the comparison JSON here");
  compare_cmd->add_option("--sources-a", compare_sources_a, "Sources available to the cluster method");
  compare_cmd->add_option("--sources-b", compare_sources_b, "Sources available to the address method");
  compare_cmd->add_flag("--deterministic", compare_deterministic, "Accepted for symmetry; output is always stable");

  // export
  auto* export_cmd = app.add_subcommand("export", "Export the final publication list");
  std::string export_session, export_format = "json", export_out;
  export_cmd->add_option("--session", export_session, "Session directory")->required();
  export_cmd->add_option("--format", export_format, "json, csv or ris");
  export_cmd->add_option("--out", export_out, "Output file; stdout when omitted");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics of a session");
  std::string stats_session;
  stats_cmd->add_option("--session", stats_session, "Session directory")->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve sessions over HTTP");
  std::string serve_root = "sessions", serve_host = "127.0.0.1";
  int serve_port = 8080;
  bool serve_deterministic = false;
  serve_cmd->add_option("--root", serve_root, "Directory holding session directories");
  serve_cmd->add_option("--host", serve_host, "Bind address");
  serve_cmd->add_option("--port", serve_port, "Port");
  serve_cmd->add_flag("--deterministic", serve_deterministic, "Omit wall-clock timestamps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : bad_arguments;
  }

  try {
    if (*ingest_cmd) {
      if (ingest_source.source_name.empty()) ingest_source.source_name = ingest_source.source_id;
      if (auto problems = validate_sources(std::vector{ingest_source}); !problems.empty())
        throw ValidationError(text::join(problems, "; "));
      std::vector<PublicationRecord> records;
      for (const auto& path : ingest_paths) {
        const auto format = format_for(path, ingest_format);
        auto parsed = ingest::parse(read_input(path), format, ingest_source);
        print_report(parsed.report, out, err);
        for (auto& r : parsed.records) records.push_back(std::move(r));
      }
      write_output(ingest_out, to_jsonl(records), out);
      return ok;
    }

    if (*run_cmd) {
      Session s;
      s.session_id = fs::path(run_session_dir).filename().string();
      if (!run_config.empty()) s.config = json::parse(read_input(run_config)).get<Config>();
      if (!run_words.empty()) s.config.function_words = ingest::load_function_words(read_input(run_words));
      s.input_profile = json::parse(read_input(run_profile)).get<ResearcherProfile>();
      if (!run_trajectory.empty()) s.input_profile.trajectory = ingest::parse_trajectory(read_input(run_trajectory));
      if (run_source.source_name.empty()) run_source.source_name = run_source.source_id;
      for (const auto& path : run_records) {
        std::vector<PublicationRecord> records;
        if (is_jsonl(path)) {
          records = read_jsonl_records(path);
        } else {
          if (run_source.source_id.empty()) throw UsageError("--source-id is required for raw export " + path);
          auto parsed = ingest::parse(read_input(path), format_for(path, run_format), run_source);
          print_report(parsed.report, err, err);
          records = std::move(parsed.records);
        }
        for (auto& r : records) {
          for (const auto& tag : r.provenance) s.register_source(tag);
          s.records.push_back(std::move(r));
        }
      }
      run_session(s);
      s.revision = 1;
      fs::create_directories(run_session_dir);
      store::SessionLock lock(run_session_dir);
      store::save_session(s, run_session_dir);
      out << run_summary(s).dump(2) << "\n";
      return ok;
    }

    if (*decide_cmd) {
      const auto decision = parse_decision(decide_decision);
      if (!decision) throw UsageError("decision must be accept or reject");
      if (!store::is_session_dir(decide_session)) throw UsageError("no session at " + decide_session);
      store::SessionLock lock(decide_session);
      auto s = load_existing(decide_session);
      if (!s.scored) throw ValidationError("session has not been run");
      auto delta = disambiguate::apply_decision(s, decide_record, *decision, decide_note, decide_override,
                                                decide_deterministic ? std::string() : service::utc_timestamp());
      ++s.revision;
      store::save_session(s, decide_session);
      out << json{{"revision", s.revision}, {"delta", delta}}.dump(2) << "\n";
      return ok;
    }

    if (*compare_cmd) {
      auto s = load_existing(compare_session);
      if (!s.scored) throw ValidationError("session has not been run");
      std::optional<std::vector<std::string>> gold;
      if (!compare_gold.empty()) {
        gold = gold_ids(compare_gold, s);
      } else if (s.gold) {
        gold = report::match_gold(*s.gold, s);
      }
      report::MethodSources sources{to_set(compare_sources_a), to_set(compare_sources_b)};
      const auto comparison = report::compare_methods(report::run_method_cluster(s, sources.a),
                                                      report::run_method_address(s, sources.b), gold, s, sources);
      out << report::comparison_table(comparison);
      const auto body = report::to_json(comparison).dump(2) + "\n";
      if (compare_out.empty())
        out << body;
      else
        write_output(compare_out, body, out);
      return ok;
    }

    if (*export_cmd) {
      const auto format = report::parse_export_format(export_format);
      if (!format) throw UsageError("unknown export format '" + export_format + "'");
      auto s = load_existing(export_session);
      if (!s.scored) throw ValidationError("session has not been run");
      write_output(export_out, report::export_list(s, *format), out);
      return ok;
    }

    if (*stats_cmd) {
      auto s = load_existing(stats_session);
      if (!s.scored) throw ValidationError("session has not been run");
      out << report::descriptive_stats(s).dump(2) << "\n";
      return ok;
    }

    if (*serve_cmd) {
      service::Service svc(serve_root, service::Options{serve_deterministic});
      out << "listening on " << serve_host << ":" << serve_port << "\n" << std::flush;
      return service::serve(svc, serve_host, serve_port) ? ok : internal_error;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return bad_arguments;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return bad_arguments;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return validation_failure;
  } catch (const ConflictError& e) {
    err << "invalid: " << e.what() << "\n";
    return validation_failure;
  } catch (const json::exception& e) {
    err << "invalid: " << e.what() << "\n";
    return validation_failure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return internal_error;
  }
  return ok;
}

}  // namespace publist::cli
