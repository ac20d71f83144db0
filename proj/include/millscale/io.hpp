#pragma once

// Output formats and the resumable cache.
//
// JSON documents use insertion-ordered keys and serialize every big integer
// as a decimal string, so emit -> parse -> emit is byte-identical. Schemas
// are listed in README.md.

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "millscale/constant_digits.hpp"
#include "millscale/error.hpp"
#include "millscale/mills_sequence.hpp"
#include "millscale/primality.hpp"
#include "millscale/prime_search.hpp"

namespace millscale {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON conversion
// ---------------------------------------------------------------------------

inline json to_json(const PrimalityStatus& s) {
  json j;
  if (const auto* c = std::get_if<Composite>(&s)) {
    j["kind"] = "composite";
    j["evidence"] = to_string(c->evidence);
    if (c->witness) j["witness"] = c->witness->to_decimal();
  } else if (const auto* p = std::get_if<ProvenPrime>(&s)) {
    j["kind"] = "proven";
    j["method"] = to_string(p->method);
  } else {
    const auto& q = std::get<ProbablePrime>(s);
    j["kind"] = "probable";
    j["bpsw"] = q.bpsw;
    j["extra_rounds"] = q.extra_rounds;
    j["rng_seed"] = q.rng_seed;
  }
  return j;
}

inline PrimalityStatus status_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "proven") {
    const std::string m = j.at("method").get<std::string>();
    if (m == "trial-division") return ProvenPrime{ProofMethod::TrialDivision};
    if (m == "deterministic-witness-set") return ProvenPrime{ProofMethod::DeterministicWitnessSet};
    throw CacheError("unknown proof method '" + m + "'");
  }
  if (kind == "probable") {
    return ProbablePrime{j.at("bpsw").get<bool>(), j.at("extra_rounds").get<unsigned>(),
                         j.at("rng_seed").get<std::uint64_t>()};
  }
  if (kind == "composite") {
    Composite c;
    const std::string ev = j.at("evidence").get<std::string>();
    if (ev == "factor") c.evidence = CompositeEvidence::Factor;
    else if (ev == "miller-rabin-base") c.evidence = CompositeEvidence::MillerRabinBase;
    else if (ev == "strong-lucas") c.evidence = CompositeEvidence::Lucas;
    else c.evidence = CompositeEvidence::None;
    if (j.contains("witness")) c.witness = Natural::from_decimal(j.at("witness").get<std::string>());
    return c;
  }
  throw CacheError("unknown primality status kind '" + kind + "'");
}

inline json to_json(const SearchStats& s) {
  return json{{"candidates_examined", s.candidates_examined},
              {"sieve_eliminated", s.sieve_eliminated},
              {"mr_tests_run", s.mr_tests_run},
              {"elapsed_seconds", s.elapsed_seconds}};
}

inline json to_json(const SequenceRecord& r) {
  return json{{"index", r.index},
              {"value", r.value.to_decimal()},
              {"decimal_digits", r.decimal_digits},
              {"status", to_json(r.status)},
              {"lower_bound_ok", r.lower_bound_ok},
              {"upper_bound_ok", r.upper_bound_ok},
              {"stats", to_json(r.stats)}};
}

inline json header_json(const char* command, unsigned c, Variant variant, const Natural& seed) {
  return json{{"command", command}, {"c", c}, {"variant", to_string(variant)}, {"seed", seed.to_decimal()}};
}

inline json statuses_json(const MillsSequence& seq) {
  json arr = json::array();
  for (const auto& r : seq.records) arr.push_back(to_json(r.status));
  return arr;
}

inline json to_json(const MillsSequence& seq, const std::vector<std::string>& warnings = {}) {
  json j = header_json("sequence", seq.c, seq.variant, seq.seed);
  j["warnings"] = warnings;
  json records = json::array();
  for (const auto& r : seq.records) records.push_back(to_json(r));
  j["records"] = std::move(records);
  return j;
}

inline json to_json(const ConstantDigits& d, const MillsSequence& seq) {
  json j = header_json("constant", d.provenance.c, d.provenance.variant, d.provenance.seed);
  j["terms_used"] = d.provenance.terms_used;
  j["requested_digits"] = d.requested_digits;
  j["certified_fraction_digits"] = d.certified_fraction_digits;
  j["digits"] = d.digits;
  j["interval"] = json{{"lo", d.interval.lo().to_string()}, {"hi", d.interval.hi().to_string()}};
  j["statuses"] = statuses_json(seq.prefix(d.provenance.terms_used));
  return j;
}

inline json to_json(const RoundTripReport& r, std::size_t gate) {
  json j = header_json("verify", r.provenance.c, r.provenance.variant, r.provenance.seed);
  j["terms_used"] = r.provenance.terms_used;
  j["frac_digits"] = r.frac_digits;
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back(json{{"index", e.index},
                           {"expected", e.expected.to_decimal()},
                           {"from_lo", e.from_lo.to_decimal()},
                           {"from_hi", e.from_hi.to_decimal()},
                           {"outcome", to_string(e.outcome)}});
  }
  j["entries"] = std::move(entries);
  j["verified_through"] = gate;
  j["passed"] = r.passed_through(gate);
  return j;
}

inline json to_json(const LemmaReport& r) {
  json j{{"command", "lemma-check"}, {"c", r.c}, {"n_min", r.n_min.to_decimal()}, {"n_max", r.n_max.to_decimal()}};
  json v = json::array();
  for (const auto& n : r.violations) v.push_back(n.to_decimal());
  j["violations"] = std::move(v);
  if (r.worst_margin) {
    j["worst_margin"] = json{{"N", r.worst_margin->n.to_decimal()},
                             {"prime", r.worst_margin->prime.to_decimal()},
                             {"slack_low", r.worst_margin->slack_low.to_decimal()},
                             {"slack_high", r.worst_margin->slack_high.to_decimal()}};
  } else {
    j["worst_margin"] = nullptr;
  }
  return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Text and b-file
// ---------------------------------------------------------------------------

inline std::string record_line(const SequenceRecord& r) {
  return std::to_string(r.index) + " " + r.value.to_decimal() + "\n";
}

/// "n a(n)" lines, ascending n, no header.
inline void emit_bfile(const MillsSequence& seq, std::ostream& os) {
  for (const auto& r : seq.records) os << record_line(r);
}

/// Status block appended after the value lines of the text format.
inline void emit_status_comments(const MillsSequence& seq, std::ostream& os) {
  for (const auto& r : seq.records) {
    os << "# " << r.index << " " << describe(r.status) << " digits=" << r.decimal_digits
       << " bounds=" << (r.lower_bound_ok && r.upper_bound_ok ? "ok" : "violated") << "\n";
  }
}

inline void emit_text(const MillsSequence& seq, std::ostream& os) {
  emit_bfile(seq, os);
  emit_status_comments(seq, os);
}

inline void emit_text(const ConstantDigits& d, const MillsSequence& seq, std::ostream& os) {
  os << d.digits << "\n";
  os << "# c=" << d.provenance.c << " variant=" << to_string(d.provenance.variant)
     << " seed=" << d.provenance.seed << " terms_used=" << d.provenance.terms_used
     << " requested_digits=" << d.requested_digits
     << " certified_digits=" << d.certified_fraction_digits << "\n";
  for (const auto& r : seq.prefix(d.provenance.terms_used).records) {
    os << "# p_" << r.index << " " << describe(r.status) << "\n";
  }
}

inline void emit_text(const RoundTripReport& r, std::size_t gate, std::ostream& os) {
  for (const auto& e : r.entries) {
    os << e.index << " " << e.expected << " " << to_string(e.outcome);
    if (e.outcome != RoundTripOutcome::Pass) os << " (lo->" << e.from_lo << ", hi->" << e.from_hi << ")";
    os << "\n";
  }
  os << "# frac_digits=" << r.frac_digits << " verified_through=" << gate
     << " result=" << (r.passed_through(gate) ? "pass" : "fail") << "\n";
}

inline void emit_text(const LemmaReport& r, std::ostream& os) {
  os << "c=" << r.c << " N=" << r.n_min << ".." << r.n_max << " violations=" << r.violations.size() << "\n";
  for (const auto& n : r.violations) os << "violation " << n << "\n";
  if (r.worst_margin) {
    os << "worst_margin N=" << r.worst_margin->n << " prime=" << r.worst_margin->prime
       << " slack_low=" << r.worst_margin->slack_low << " slack_high=" << r.worst_margin->slack_high << "\n";
  }
}

/// Digit file body: "1." then the certified digits, 50 per line, trailing
/// newline.
inline std::string digit_file_contents(const ConstantDigits& d) {
  const auto dot = d.digits.find('.');
  if (dot == std::string::npos) return d.digits + "\n";
  const std::string head = d.digits.substr(0, dot + 1);
  const std::string frac = d.digits.substr(dot + 1);
  std::string out = head;
  for (std::size_t i = 0; i < frac.size(); i += 50) {
    if (i > 0) out += "\n";
    out += frac.substr(i, 50);
  }
  return out + "\n";
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << contents;
  f.flush();
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Digit file at `path` plus a JSON sidecar at `path` + ".json".
inline void write_digit_files(const std::filesystem::path& path, const ConstantDigits& d,
                              const MillsSequence& seq) {
  write_file(path, digit_file_contents(d));
  json meta{{"c", d.provenance.c},
            {"variant", to_string(d.provenance.variant)},
            {"seed", d.provenance.seed.to_decimal()},
            {"terms_used", d.provenance.terms_used},
            {"certified_fraction_digits", d.certified_fraction_digits},
            {"statuses", statuses_json(seq.prefix(d.provenance.terms_used))}};
  write_file(path.string() + ".json", dump(meta));
}

// ---------------------------------------------------------------------------
// Cache
// ---------------------------------------------------------------------------

inline json cache_json(const MillsSequence& seq) {
  json terms = json::array();
  for (const auto& r : seq.records) terms.push_back(r.value.to_decimal());
  return json{{"c", seq.c},
              {"variant", to_string(seq.variant)},
              {"seed", seq.seed.to_decimal()},
              {"terms", std::move(terms)},
              {"statuses", statuses_json(seq)}};
}

inline void save_cache(const std::filesystem::path& path, const MillsSequence& seq) {
  write_file(path, dump(cache_json(seq)));
}

struct CacheLoad {
  bool matched = false;  // file parameters equal the configuration
  MillsSequence sequence;
};

/// Reads a cache file and re-verifies every stored term (primality and
/// sandwich bounds). A file whose (c, variant, seed) differ from `cfg` is
/// reported as unmatched rather than used.
inline CacheLoad load_cache(const std::filesystem::path& path, const MillsConfig& cfg) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw CacheError("cache '" + path.string() + "' is not valid JSON: " + e.what());
  }
  std::vector<Natural> values;
  try {
    const auto c = j.at("c").get<unsigned>();
    const Variant variant = parse_variant(j.at("variant").get<std::string>());
    const Natural seed = Natural::from_decimal(j.at("seed").get<std::string>());
    if (c != cfg.c || variant != cfg.variant || seed != cfg.seed) return CacheLoad{false, {}};
    for (const auto& t : j.at("terms")) values.push_back(Natural::from_decimal(t.get<std::string>()));
    const auto& statuses = j.at("statuses");
    if (statuses.size() != values.size()) throw CacheError("cache term and status counts differ");
    for (const auto& s : statuses) (void)status_from_json(s);
  } catch (const json::exception& e) {
    throw CacheError("cache '" + path.string() + "' is malformed: " + e.what());
  } catch (const InvalidArgument& e) {
    throw CacheError("cache '" + path.string() + "' is malformed: " + e.what());
  }
  return CacheLoad{true, verify_values(cfg, values)};
}

}  // namespace millscale
