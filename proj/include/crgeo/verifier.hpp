#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "crgeo/types.hpp"

namespace crgeo {

enum class Lemma { TL1, TL2, TL3, Pictures };
const char* lemma_name(Lemma l);
Lemma lemma_from_name(const std::string& s);

struct SweepConfig {
  double s0 = kSLow, s1 = kSBar;
  int n = 64;
  int n_curve = 2048;     // samples per closed curve
  int n_arcs = 96;        // cone arcs per disk
  int n_pts = 48;         // samples per cone arc
  int n_affiliates = 32;  // random affiliates per sample (two-cusp check)
  int n_triples = 1000;   // random (v, w, u) triples for the monotonicity check
  double end_eps = 1e-6;  // s-bar is replaced by s-bar - end_eps
  double identity_tol = 1e-8;
  double agree_tol = 1e-6;
  std::uint64_t seed = 12345;
  int threads = 0;        // 0: hardware concurrency

  // Sample parameters, with the degenerate endpoint replaced.
  std::vector<double> samples() const;
  void validate() const;
  nlohmann::json to_json() const;
  static SweepConfig from_json(const nlohmann::json& j);
};

// One inequality or agreement test. margin > 0 iff the relation holds strictly.
struct Check {
  std::string name;
  std::string rel;  // ">", ">=", "<", "<=", "=="
  double value = 0, bound = 0, margin = 0;
  bool pass = false;
};

struct SampleRecord {
  double s = 0, x = 0;
  bool certified = false;
  std::vector<Check> checks;
  std::map<std::string, double> values;  // informational quantities
  std::string error, error_kind;
  nlohmann::json detail;                 // offending geometry on failure
  bool pass = false;

  void gt(const std::string& name, double value, double bound);
  void ge(const std::string& name, double value, double bound);
  void lt(const std::string& name, double value, double bound);
  void le(const std::string& name, double value, double bound);
  void eq(const std::string& name, double value, double expected);
  // |a - b| <= tol
  void agree(const std::string& name, double a, double b, double tol);
  const Check* find(const std::string& name) const;
  void finish();
};

struct LemmaReport {
  std::string lemma;
  SweepConfig cfg;
  std::vector<SampleRecord> samples;
  bool verdict = false;    // AND over samples
  bool certified = false;  // every sample inside the certified interval

  std::map<std::string, double> min_margins() const;
  nlohmann::json to_json() const;
  std::string json() const;
  // Rows: lemma,s,check,value,bound,margin,pass
  std::string csv(bool header = true) const;
};

struct SweepReport {
  SweepConfig cfg;
  std::vector<LemmaReport> lemmas;
  bool verdict = false;
  bool certified = false;

  nlohmann::json to_json() const;
  std::string json() const;
  std::string csv() const;
};

SampleRecord verify_sample(Lemma l, double s, const SweepConfig& cfg, int index = 0);
LemmaReport verify(Lemma l, const SweepConfig& cfg);
LemmaReport verify_TL1(const SweepConfig& cfg);
LemmaReport verify_TL2(const SweepConfig& cfg);
LemmaReport verify_TL3(const SweepConfig& cfg);
LemmaReport verify_pictures(const SweepConfig& cfg);
// All four lemmas. Throws IdentityViolation (message holds the serialized
// sample) if a closed form disagrees with direct arithmetic.
SweepReport sweep(const SweepConfig& cfg);

// Shortest round-trip decimal for a double; "nan"/"inf" spelled out.
std::string format_double(double v);

}  // namespace crgeo
