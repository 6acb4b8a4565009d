#include "doctest.h"

#include "publist/disambiguate.hpp"
#include "publist/ingest.hpp"
#include "publist/json_io.hpp"
#include "publist/report.hpp"
#include "publist/text.hpp"
#include "support.hpp"

#include <algorithm>

using namespace publist;
using namespace publist::report;

namespace {

const SourceTag kWos{"wos", "Web of Science", 0};
const SourceTag kScopus{"scopus", "Scopus", 1};

Session fixture_session() {
  Session s;
  s.config = json::parse(testing::read_fixture("homonym12_config.json")).get<Config>();
  s.input_profile = json::parse(testing::read_fixture("homonym12_profile.json")).get<ResearcherProfile>();
  s.input_profile.trajectory = ingest::parse_trajectory(testing::read_fixture("homonym12.traj"));
  s.register_source(kWos);
  s.records = ingest::parse_ris(testing::read_fixture("homonym12.ris"), kWos).records;
  run_session(s);
  return s;
}

std::string id_of(const Session& s, const std::string& title_prefix) {
  for (const auto& [id, r] : s.canonical)
    if (r.title.rfind(title_prefix, 0) == 0) return id;
  throw std::runtime_error("no record titled " + title_prefix);
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("methods on the homonym fixture follow the scripted oracle") {
    const auto expected = json::parse(testing::read_fixture("homonym12_expected.json"));
    Session s = fixture_session();

    std::set<std::string> cluster_oracle;
    for (const auto& [id, e] : expected.at("initial").items())
      if (!e.at("inclusion_round").is_null() || e.at("combined").get<double>() >= 0.70) cluster_oracle.insert(id);
    CHECK(run_method_cluster(s) == cluster_oracle);

    std::set<std::string> address_oracle;
    for (const auto& [id, e] : expected.at("initial").items()) {
      const auto& a = e.at("components").at("address");
      if (!a.is_null() && a.get<double>() >= 0.5) address_oracle.insert(id);
    }
    CHECK(run_method_address(s) == address_oracle);

    // The partial address 0.4667 example falls under the default floor.
    CHECK(run_method_address(s).count(id_of(s, "Citation windows")) == 0);
    CHECK(run_method_address(s).count(id_of(s, "Partition based")) == 0);
  }

  TEST_CASE("compare_methods examples") {
    Session s = fixture_session();
    auto a = run_method_cluster(s);
    auto same = compare_methods(a, a, std::vector<std::string>(a.begin(), a.end()), s);
    CHECK(same.only_a.empty());
    CHECK(same.only_b.empty());
    CHECK(same.recall_a == same.recall_b);
    CHECK(same.recall_a == 1.0);

    const auto x = id_of(s, "Partition based");  // no addresses
    auto single = compare_methods({x}, {}, std::nullopt, s);
    CHECK(single.reasons.at(x) == Reason::no_address_match);
    CHECK(!single.recall_a);
    CHECK(!single.recall_union);

    const auto y = id_of(s, "Funding allocation");  // address match, outside the cluster
    auto other = compare_methods({}, {y}, std::nullopt, s);
    CHECK(other.reasons.at(y) == Reason::not_in_cluster);

    // Source filters: a record drawn only from wos is missing from a
    // scopus-only method.
    MethodSources scopus_b{{}, {"scopus"}};
    auto filtered = compare_methods({x}, {}, std::nullopt, s, scopus_b);
    CHECK(filtered.reasons.at(x) == Reason::source_missing);

    std::set<std::string> A = {"1", "2", "3", "4", "5"};
    auto ie = compare_methods(A, {"1", "2", "3", "9"}, std::nullopt, s);
    CHECK(ie.both.size() == 3);
    std::set<std::string> u = ie.set_a;
    u.insert(ie.set_b.begin(), ie.set_b.end());
    CHECK(u.size() == 6);
    CHECK(u.size() == ie.set_a.size() + ie.set_b.size() - ie.both.size());
    CHECK(ie.reasons.size() == ie.only_a.size() + ie.only_b.size());
    CHECK(ie.reasons.at("9") == Reason::other);
  }

  TEST_CASE("gold matching and unmatched entries") {
    Session s = fixture_session();
    PublicationRecord by_title;
    by_title.title = "RESEARCH EXCELLENCE milestones of Brussels researchers!";
    by_title.year = 2007;
    PublicationRecord missing;
    missing.title = "A paper nobody ingested";
    missing.year = 2015;
    std::vector<PublicationRecord> gold = {by_title, missing};
    auto ids = match_gold(gold, s);
    REQUIRE(ids.size() == 2);
    CHECK(ids[0] == id_of(s, "Research excellence"));
    CHECK(ids[1] == "unmatched: A paper nobody ingested (2015)");

    auto c = compare_methods(run_method_cluster(s), run_method_address(s), ids, s);
    CHECK(c.unmatched_gold == std::vector<std::string>{ids[1]});
    CHECK(c.gold_size == 2);
    CHECK(*c.recall_union == doctest::Approx(0.5));
    const auto j = to_json(c);
    CHECK(j.at("unmatched_gold").size() == 1);
    CHECK(comparison_table(c).find("unmatched gold: unmatched: A paper nobody ingested (2015)") != std::string::npos);
  }

  TEST_CASE("comparison algebra on fuzzed sets") {
    Session s = fixture_session();
    std::vector<std::string> pool = s.pool;
    pool.push_back("doi:10.1/not-in-session");
    testing::Rng rng(23);
    for (int i = 0; i < 300; ++i) {
      std::set<std::string> a, b;
      std::vector<std::string> gold;
      for (const auto& id : pool) {
        if (testing::chance(rng, 0.4)) a.insert(id);
        if (testing::chance(rng, 0.4)) b.insert(id);
        if (testing::chance(rng, 0.3)) gold.push_back(id);
      }
      auto c = compare_methods(a, b, gold.empty() ? std::nullopt : std::optional(gold), s);
      std::set<std::string> u = a;
      u.insert(b.begin(), b.end());
      CHECK(u.size() == a.size() + b.size() - c.both.size());
      CHECK(c.only_a.size() + c.only_b.size() + c.both.size() == u.size());
      CHECK(c.reasons.size() == c.only_a.size() + c.only_b.size());
      for (const auto& id : c.only_a) CHECK(c.reasons.count(id) == 1);
      for (const auto& id : c.only_b) CHECK(c.reasons.count(id) == 1);
      if (c.recall_union) {
        CHECK(*c.recall_union >= *c.recall_a);
        CHECK(*c.recall_union >= *c.recall_b);
      }
    }
  }

  TEST_CASE("descriptive statistics") {
    Session empty;
    empty.input_profile.variants = {ingest::normalize_name("Maes, N.")};
    run_session(empty);
    auto z = descriptive_stats(empty);
    CHECK(z.at("pool_size") == 0);
    CHECK(z.at("tiers").at("ACCEPTED") == 0);
    CHECK(z.at("final_list").at("count") == 0);
    CHECK(z.at("decisions").at("total") == 0);

    Session one;
    one.input_profile = empty.input_profile;
    one.input_profile.trajectory = ingest::parse_trajectory(" | Vrije Universiteit Brussel | Brussels");
    one.register_source({"s", "S", 0});
    PublicationRecord r;
    r.title = "Only paper";
    r.year = 2001;
    r.authors = {ingest::normalize_name("Maes, N.")};
    r.addresses = {"Vrije Universiteit Brussel, Brussels"};
    r.provenance = {{"s", "S", 0}};
    assign_record_id(r);
    one.records = {r};
    run_session(one);
    auto st = descriptive_stats(one);
    CHECK(st.at("final_list").at("by_source") == json{{"s", 1}});
    CHECK(st.at("final_list").at("by_year") == json{{"2001", 1}});

    const auto expected = json::parse(testing::read_fixture("homonym12_expected.json"));
    Session s = fixture_session();
    auto fs = descriptive_stats(s);
    std::map<std::string, int> tiers;
    std::array<int, 10> address_bins{};
    for (const auto& [id, e] : expected.at("initial").items()) {
      ++tiers[e.at("tier").get<std::string>()];
      const auto& a = e.at("components").at("address");
      if (!a.is_null()) ++address_bins[std::min(9, static_cast<int>(a.get<double>() * 10))];
    }
    for (const auto& [t, n] : tiers) CHECK(fs.at("tiers").at(t) == n);
    CHECK(fs.at("histograms").at("address").get<std::vector<int>>() ==
          std::vector<int>(address_bins.begin(), address_bins.end()));
    CHECK(fs.at("pool").at("count") == expected.at("pool").size());
    CHECK(fs.at("records_ingested") == 12);
  }

  TEST_CASE("export formats") {
    Session s = fixture_session();
    const auto list = final_list(s);
    REQUIRE(!list.empty());
    for (std::size_t i = 1; i < list.size(); ++i) {
      CHECK(list[i - 1].year >= list[i].year);
      if (list[i - 1].year == list[i].year) CHECK(list[i - 1].title <= list[i].title);
    }

    const auto csv = export_list(s, ExportFormat::csv);
    CHECK(csv.rfind("record_id,doi,year,title,venue,doc_type,tier,combined\r\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == list.size() + 1);
    auto rows = ingest::read_table(csv, ',');
    CHECK(rows.size() == list.size() + 1);
    CHECK(rows[1].cells[0] == list[0].record_id);

    const auto js = json::parse(export_list(s, ExportFormat::json));
    CHECK(js.size() == list.size());

    const auto ris = export_list(s, ExportFormat::ris);
    auto reparsed = ingest::parse_ris(ris, kWos);
    REQUIRE(reparsed.records.size() == list.size());
    for (std::size_t i = 0; i < list.size(); ++i) CHECK(reparsed.records[i] == list[i]);
    CHECK(ingest::serialize_ris(reparsed.records) == ris);

    CHECK(parse_export_format("RIS") == ExportFormat::ris);
    CHECK(!parse_export_format("bibtex"));
    CHECK(content_type(ExportFormat::csv) == "text/csv");
    CHECK(content_type(ExportFormat::ris) == "application/x-research-info-systems");
    CHECK(csv_escape("a,\"b\"") == "\"a,\"\"b\"\"\"");

    Session none;
    none.input_profile.variants = {ingest::normalize_name("Nobody, X.")};
    run_session(none);
    CHECK(export_list(none, ExportFormat::json) == "[]\n");
    CHECK(export_list(none, ExportFormat::ris).empty());
    CHECK(export_list(none, ExportFormat::csv) == "record_id,doi,year,title,venue,doc_type,tier,combined\r\n");
  }
}
