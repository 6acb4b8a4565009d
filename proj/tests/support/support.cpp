#include "support.hpp"

#include "publist/ingest.hpp"
#include "publist/text.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#ifndef PUBLIST_FIXTURE_DIR
#error "PUBLIST_FIXTURE_DIR must be defined"
#endif

namespace publist::testing {

namespace fs = std::filesystem;

fs::path fixture_dir() { return PUBLIST_FIXTURE_DIR; }

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_dir() / name, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  static std::size_t counter = 0;
  std::random_device rd;
  for (;;) {
    auto dir = fs::temp_directory_path() /
               ("publist-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    if (fs::create_directories(dir)) return dir;
  }
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

const std::vector<std::string> kWords = {
    "analysis",   "citation",    "network",     "measure",    "impact",     "research",   "evaluation",
    "journal",    "field",       "method",      "model",      "structure",  "dynamics",   "growth",
    "patent",     "university",  "ranking",     "indicator",  "excellence", "funding",    "policy",
    "science",    "knowledge",   "collaboration", "mapping",  "diffusion",  "emergence",  "quality",
    "peer",       "review",      "scholarly",   "output",     "productivity", "gender",   "mobility",
    "career",     "framework",   "approach",    "comparison", "study",      "case",       "national",
    "global",     "regional",    "open",        "access",     "data",       "semantic",   "topic",
    "cluster",    "detection",   "author",      "name",       "disambiguation", "record", "linkage",
    "library",    "archive",     "historical",  "trend",      "forecast",   "statistical", "test",
    "über",       "études",      "señal",       "crèche",     "naïve",      "façade",     "coöperation",
    "estuary",    "larvae",      "salinity",    "lagoon",     "fisheries",  "coastal",    "marine",
    "protein",    "enzyme",      "catalysis",   "polymer",    "membrane",   "sensor",     "laser"};

const std::vector<std::string> kConnectives = {"of", "and", "in", "for", "on", "the", "a", "with", "by", "from"};

const std::vector<std::string> kSurnames = {
    "Maes",  "Claes",   "Debackere", "Glänzel", "Spruyt", "Silva",  "Costa",  "Pereira", "Smith",  "Janssens",
    "Peeters", "Müller", "Nuñez",  "O'Brien", "Dupont", "Moreau",  "Novák",  "Weiß",    "Lindqvist", "Kowalski",
    "Tanaka", "Okafor", "Haddad",  "Ivanova", "Rossi",  "García",  "Martin", "Ng",      "Li",     "Park"};

const std::vector<std::string> kParticles = {"van", "de", "van der", "von", "da", "le"};

const std::vector<std::string> kGiven = {"Nadine", "Jean-Pierre", "Ana", "Björn", "Luc", "Karel", "Wolfgang",
                                         "Émile", "Sofia", "Tom",  "Inês",  "Piotr", "Yuki", "Amara"};

const std::vector<std::string> kVenues = {"Scientometrics", "Research Evaluation", "Journal of Informetrics",
                                          "Research Policy", "Marine Ecology", "Proceedings of ISSI",
                                          "Quantitative Science Studies", "PLOS ONE"};

std::string initials_of(Rng& rng) {
  std::string s;
  const std::size_t n = uniform(rng, 1, 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += " ";
    s += static_cast<char>('A' + uniform(rng, 0, 25));
    s += ".";
  }
  return s;
}

std::string letters_typo(Rng& rng, std::string title, std::size_t edits) {
  for (std::size_t e = 0; e < edits; ++e) {
    std::vector<std::size_t> letters;
    for (std::size_t i = 0; i < title.size(); ++i)
      if (std::isalpha(static_cast<unsigned char>(title[i]))) letters.push_back(i);
    if (letters.empty()) return title;
    const auto pos = pick(rng, letters);
    const char c = static_cast<char>('a' + uniform(rng, 0, 25));
    switch (uniform(rng, 0, 2)) {
      case 0: title[pos] = c; break;
      case 1: title.insert(title.begin() + static_cast<std::ptrdiff_t>(pos), c); break;
      default:
        if (letters.size() > 1) title.erase(title.begin() + static_cast<std::ptrdiff_t>(pos));
        break;
    }
  }
  return title;
}

}  // namespace

std::string random_words(Rng& rng, std::size_t min_words, std::size_t max_words) {
  const std::size_t n = uniform(rng, min_words, max_words);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += " ";
    std::string w = (i > 0 && chance(rng, 0.25)) ? pick(rng, kConnectives) : pick(rng, kWords);
    if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    out += w;
  }
  return out;
}

std::string random_raw_name(Rng& rng) {
  std::string surname = pick(rng, kSurnames);
  if (chance(rng, 0.15)) surname = pick(rng, kParticles) + " " + surname;
  switch (uniform(rng, 0, 3)) {
    case 0: return surname + ", " + initials_of(rng);
    case 1: return surname + ", " + pick(rng, kGiven);
    case 2: return pick(rng, kGiven) + " " + surname;
    default: {
      // Legacy "SURNAME X" form; only single-token surnames survive it.
      std::string upper = pick(rng, kSurnames);
      if (!text::is_ascii(upper)) return upper + ", " + initials_of(rng);
      for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return upper + " " + std::string(1, static_cast<char>('A' + uniform(rng, 0, 25)));
    }
  }
}

PublicationRecord random_ris_record(Rng& rng, const SourceTag& source) {
  PublicationRecord r;
  r.title = random_words(rng, 2, 12);
  if (chance(rng, 0.2)) r.title += ": " + random_words(rng, 1, 4);
  if (chance(rng, 0.1)) r.title += "?";
  r.year = static_cast<int>(uniform(rng, 1900, 2025));
  const std::size_t n_authors = uniform(rng, 1, 5);
  for (std::size_t i = 0; i < n_authors; ++i) r.authors.push_back(ingest::normalize_name(random_raw_name(rng)));
  if (chance(rng, 0.6)) r.abstract = random_words(rng, 5, 30) + ". " + random_words(rng, 3, 20) + ".";
  if (chance(rng, 0.8)) r.venue = pick(rng, kVenues);
  r.doc_type = static_cast<DocType>(uniform(rng, 0, 3));
  for (std::size_t i = uniform(rng, 0, 4); i > 0; --i) r.keywords.push_back(random_words(rng, 1, 3));
  if (chance(rng, 0.5)) r.doi = "10." + std::to_string(uniform(rng, 1000, 9999)) + "/x" + std::to_string(rng() % 1000000);
  for (std::size_t i = uniform(rng, 0, 3); i > 0; --i)
    r.addresses.push_back(random_words(rng, 2, 5) + ", " + pick(rng, kWords) + ", Belgium");
  r.provenance = {source};
  assign_record_id(r);
  return r;
}

std::vector<PublicationRecord> dedup_corpus(Rng& rng, std::size_t max_records) {
  const std::vector<SourceTag> sources = {{"wos", "Web of Science", 0}, {"scopus", "Scopus", 1},
                                          {"orcid", "ORCID", 2}, {"cv", "Curriculum vitae", 3}};
  std::vector<PublicationRecord> out;
  std::vector<PublicationRecord> works;
  const std::size_t target = uniform(rng, 1, max_records);
  while (out.size() < target) {
    PublicationRecord base;
    if (!works.empty() && chance(rng, 0.1)) {
      // A sibling: similar title, same authors, near the threshold.
      base = pick(rng, works);
      base.title = letters_typo(rng, base.title, uniform(rng, 3, 5));
      base.doi.reset();
    } else {
      base.title = random_words(rng, 3, 9);
      base.year = static_cast<int>(uniform(rng, 1990, 2024));
      for (std::size_t i = uniform(rng, 1, 4); i > 0; --i) {
        AuthorName a = ingest::normalize_name(pick(rng, kSurnames) + ", " + initials_of(rng));
        base.authors.push_back(a);
      }
      if (chance(rng, 0.4)) base.doi = "10.1000/w" + std::to_string(rng() % 100000000);
      if (chance(rng, 0.5)) base.venue = pick(rng, kVenues);
      if (chance(rng, 0.3)) base.abstract = random_words(rng, 5, 20) + ".";
    }
    works.push_back(base);

    const std::size_t copies = uniform(rng, 1, 4);
    for (std::size_t c = 0; c < copies && out.size() < target; ++c) {
      PublicationRecord r = base;
      if (c > 0) {
        if (chance(rng, 0.5)) r.title = letters_typo(rng, r.title, uniform(rng, 1, 2));
        if (chance(rng, 0.3)) r.year += chance(rng, 0.5) ? 1 : -1;
        if (chance(rng, 0.3)) r.doi.reset();
        if (r.authors.size() > 1 && chance(rng, 0.3)) r.authors.resize(uniform(rng, 1, r.authors.size() - 1));
        if (chance(rng, 0.3)) r.abstract.reset();
      }
      r.provenance = {sources[uniform(rng, 0, sources.size() - 1)]};
      r.native_ids[r.provenance.front().source_id] = "N" + std::to_string(out.size());
      assign_record_id(r);
      out.push_back(std::move(r));
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::vector<std::vector<std::size_t>> all_pairs_partition(const std::vector<PublicationRecord>& records,
                                                          const Config& cfg) {
  const std::size_t n = records.size();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  // Transitive closure by repeated relabelling until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (label[i] != label[j] && merge::is_duplicate(records[i], records[j], cfg)) {
          const auto from = std::max(label[i], label[j]), to = std::min(label[i], label[j]);
          for (auto& l : label)
            if (l == from) l = to;
          changed = true;
        }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[label[i]].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [l, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, int> inclusion_oracle(const std::set<std::string>& seeds,
                                            const std::map<std::string, std::set<std::string>>& pool, int k,
                                            int max_rounds) {
  auto keys_of = [&](const std::set<std::string>& ids) {
    std::set<std::string> keys;
    for (const auto& id : ids)
      if (auto it = pool.find(id); it != pool.end()) keys.insert(it->second.begin(), it->second.end());
    return keys;
  };
  auto qualifies = [&](const std::string& id, const std::set<std::string>& keys) {
    int shared = 0;
    for (const auto& key : pool.at(id)) shared += keys.count(key) ? 1 : 0;
    return shared >= k;
  };

  // Least fixpoint by chaotic iteration: add any one qualifying record, restart.
  std::set<std::string> fix = seeds;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [id, keys] : pool) {
      if (fix.count(id) || !qualifies(id, keys_of(fix))) continue;
      fix.insert(id);
      grew = true;
      break;
    }
  }

  // Rounds by Kleene iteration from the seeds.
  std::map<std::string, int> rounds;
  std::set<std::string> current = seeds;
  for (const auto& s : seeds) rounds[s] = 0;
  for (int t = 1; t <= max_rounds; ++t) {
    const auto keys = keys_of(current);
    std::set<std::string> next = current;
    for (const auto& [id, ks] : pool)
      if (!current.count(id) && qualifies(id, keys)) next.insert(id);
    if (next == current) break;
    for (const auto& id : next)
      if (!current.count(id)) rounds[id] = t;
    current = std::move(next);
  }

  if (max_rounds >= static_cast<int>(pool.size()) + 1) {
    std::set<std::string> from_rounds;
    for (const auto& [id, r] : rounds) from_rounds.insert(id);
    if (from_rounds != fix) throw std::logic_error("inclusion oracle: Kleene and chaotic fixpoints disagree");
  }
  return rounds;
}

namespace {

const std::vector<std::string> kTargetCoauthors = {"Claes, L.", "Spruyt, E.", "Debackere, K.", "Glänzel, W.",
                                                   "Peeters, B.", "Janssens, F.", "Moed, H.", "Dupont, C.",
                                                   "Martens, A.", "Van Hecke, P.", "Thijs, B.", "Engels, T.",
                                                   "Verleysen, F.", "Zhang, L.", "Sivertsen, G."};
const std::vector<std::string> kHomonymCoauthors = {"Silva, J.", "Costa, M.", "Pereira, A.", "Cabral, H.",
                                                    "Vinagre, C.", "Franca, S.", "Leitao, R.", "Santos, P.",
                                                    "Ferreira, T.", "Rosa, R.", "Gomes, V.", "Nunes, D.",
                                                    "Teixeira, I.", "Lopes, A.", "Marques, E."};
const std::vector<std::string> kTargetTopics = {"research evaluation", "bibliometrics", "peer review",
                                                "citation analysis", "research excellence", "field normalization",
                                                "science policy", "funding allocation"};
const std::vector<std::string> kHomonymTopics = {"fish larvae", "estuary", "sea bass", "coastal lagoon",
                                                 "fisheries", "marine ecology", "nursery habitat", "salinity"};
const std::vector<std::string> kTargetVenues = {"Scientometrics", "Research Evaluation", "Journal of Informetrics"};
const std::vector<std::string> kHomonymVenues = {"Marine Ecology Progress Series", "Estuarine Coastal and Shelf Science",
                                                 "Journal of Fish Biology"};
const std::vector<std::string> kTargetTitleWords = {"indicators", "excellence", "evaluation", "citation", "impact",
                                                    "peer", "review", "university", "funding", "normalization",
                                                    "ranking", "assessment", "bibliometric", "output", "teams"};
const std::vector<std::string> kHomonymTitleWords = {"larvae", "estuarine", "juvenile", "growth", "salinity",
                                                     "lagoon", "bass", "nursery", "recruitment", "fisheries",
                                                     "habitat", "temperature", "diet", "plankton", "abundance"};
const std::vector<std::string> kNouns = {"results", "panel", "data", "method", "sample", "model", "units",
                                         "scores", "period", "design", "sites", "groups", "values", "trend"};

// Function-word habits differ between the two researchers.
std::string abstract_in_style(Rng& rng, bool target) {
  std::string out;
  const std::size_t sentences = uniform(rng, 3, 5);
  for (std::size_t s = 0; s < sentences; ++s) {
    std::string sent;
    if (target) {
      sent = "The " + pick(rng, kNouns) + " of the " + pick(rng, kTargetTitleWords) + " and the " +
             pick(rng, kNouns) + " of the " + pick(rng, kNouns) + " are compared in the " + pick(rng, kNouns);
    } else {
      sent = "We found " + pick(rng, kNouns) + " for " + pick(rng, kHomonymTitleWords) + " with " +
             pick(rng, kNouns) + " to " + pick(rng, kNouns) + ", which is " + pick(rng, kNouns) + " at " +
             pick(rng, kNouns);
    }
    out += (s ? " " : "") + sent + ".";
  }
  return out;
}

std::string planted_title(Rng& rng, const std::vector<std::string>& words) {
  std::string t;
  const std::size_t n = uniform(rng, 4, 8);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) t += (chance(rng, 0.3) ? " of " : " ");
    t += pick(rng, words);
  }
  t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  return t + " " + std::to_string(rng() % 100000);
}

}  // namespace

PlantedCorpus planted_corpus(Rng& rng, std::size_t n_records) {
  PlantedCorpus pc;
  pc.sources = {{"wos", "Web of Science", 0}, {"scopus", "Scopus", 1}};
  pc.profile.variants = {ingest::normalize_name("Maes, N.")};
  pc.profile.trajectory = ingest::parse_trajectory(
      "1995-2005 | Vrije Universiteit Brussel | Brussels | BE\n"
      "2006- | Research Coordination Unit Vrije Universiteit Brussel | Brussels | BE\n");

  const std::size_t n_target = n_records * 45 / 100;
  const std::size_t n_homonym = n_records * 40 / 100;
  for (std::size_t i = 0; i < n_records; ++i) {
    const bool target = i < n_target;
    const bool homonym = !target && i < n_target + n_homonym;
    PublicationRecord r;
    r.year = static_cast<int>(uniform(rng, 1996, 2022));
    if (target || homonym) {
      std::string own = "Maes, N.";
      if (target && chance(rng, 0.1)) own = "Maes, N. A.";
      if (target && chance(rng, 0.1)) own = "N. Maes";
      const auto& coauthors = target ? kTargetCoauthors : kHomonymCoauthors;
      std::vector<std::string> names = {own};
      const std::size_t n_co = chance(rng, 0.1) ? 0 : uniform(rng, 1, 3);
      for (std::size_t c = 0; c < n_co; ++c) {
        auto name = pick(rng, coauthors);
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
      }
      std::shuffle(names.begin() + 1, names.end(), rng);
      if (names.size() > 1 && chance(rng, 0.4)) std::swap(names[0], names[uniform(rng, 1, names.size() - 1)]);
      for (const auto& n : names) r.authors.push_back(ingest::normalize_name(n));
      r.title = planted_title(rng, target ? kTargetTitleWords : kHomonymTitleWords);
      for (std::size_t k = uniform(rng, 1, 3); k > 0; --k)
        r.keywords.push_back(pick(rng, target ? kTargetTopics : kHomonymTopics));
      r.venue = pick(rng, target ? kTargetVenues : kHomonymVenues);
      if (chance(rng, 0.8)) r.abstract = abstract_in_style(rng, target);
      if (chance(rng, 0.8)) {
        if (target)
          r.addresses.push_back(r.year <= 2005 ? "Vrije Universiteit Brussel, Brussels, Belgium"
                                               : "Vrije Universiteit Brussel, Research Coordination Unit, Brussels, Belgium");
        else
          r.addresses.push_back("Universidade de Lisboa, Faculdade de Ciencias, Lisbon, Portugal");
      }
    } else {
      r.authors.push_back(ingest::normalize_name(chance(rng, 0.5) ? "Maes, P." : "Maas, N."));
      r.authors.push_back(ingest::normalize_name(pick(rng, kTargetCoauthors)));
      r.title = planted_title(rng, kTargetTitleWords);
      r.venue = pick(rng, kTargetVenues);
      r.addresses.push_back("Vrije Universiteit Brussel, Library, Brussels, Belgium");
    }
    r.provenance = {pc.sources[uniform(rng, 0, 1)]};
    assign_record_id(r);
    if (target) pc.truth.insert(r.record_id);
    pc.records.push_back(std::move(r));
  }
  std::shuffle(pc.records.begin(), pc.records.end(), rng);
  return pc;
}

Session run_records(std::vector<PublicationRecord> records, const ResearcherProfile& profile, Config cfg) {
  Session s;
  s.session_id = "test";
  s.config = std::move(cfg);
  s.input_profile = profile;
  for (const auto& r : records)
    for (const auto& tag : r.provenance) s.register_source(tag);
  s.records = std::move(records);
  run_session(s);
  return s;
}

bool same_scores(const CandidateAssignment& a, const CandidateAssignment& b) {
  return a.record_id == b.record_id && a.components == b.components && a.weights_used == b.weights_used &&
         a.combined == b.combined && a.tier == b.tier && a.inclusion_round == b.inclusion_round;
}

}  // namespace publist::testing
