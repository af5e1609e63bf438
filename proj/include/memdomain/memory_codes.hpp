#pragma once

// Memory codes: sets {N_k} recorded under the reality-condition window,
// degraded as their modes die, and recalled by a replication signal.
//
// The similarity metric (cosine of the N-spectra), the 0.5 match threshold
// and the recall energy threshold E = c k~(n_min, t) are model choices; the
// underlying model describes association and recall only qualitatively.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memdomain/oscillator.hpp"

namespace memdomain::memory {

inline constexpr double kMatchThreshold = 0.5;

struct StimulusComponent {
  double k = 1.0;
  int n = 0;
  double intensity = 0.0;
};

struct StimulusSpectrum {
  std::vector<StimulusComponent> components;
  /// k > 0, n >= 0, finite non-negative intensity, no repeated k.
  void validate() const;
};

struct CodeEntry {
  double intensity = 0.0;  ///< N_k
  int n = 0;
  double t_rec = 0.0;
};

enum class CodeStatus { Intact, Degraded, Forgotten };

struct MemoryCode {
  std::string id;
  std::map<double, CodeEntry> entries;  ///< keyed by k
  CodeStatus status = CodeStatus::Intact;
};

enum class RejectReason { BelowThreshold, WindowClosed };

struct Rejection {
  StimulusComponent component;
  RejectReason reason = RejectReason::BelowThreshold;
};

struct RecordResult {
  std::optional<std::string> code_id;  ///< empty when every component was refused
  std::vector<Rejection> rejected;
  bool refreshed = false;
};

enum class RecallOutcome { Recalled, DifficultyRecalling, NoMatch };

struct RecallResult {
  std::optional<std::string> matched;
  double score = 0.0;
  RecallOutcome outcome = RecallOutcome::NoMatch;
  double energy_threshold = 0.0;  ///< zero when there was no match
};

/// Codes in recording order. Mutations (record, decay_codes) must be
/// serialised by the caller; the const queries may run concurrently.
struct Registry {
  std::vector<MemoryCode> codes;
  std::uint64_t next_id = 1;
  double clock = 0.0;  ///< time of the last decay sweep

  [[nodiscard]] const MemoryCode* find(const std::string& id) const;
  MemoryCode* find(const std::string& id);
};

/// Records the live components of a stimulus as a new code. A component is
/// refused with BelowThreshold when 2 w0_k < L (never recordable) and with
/// WindowClosed when t >= T_{k,n}. When `refresh_id` names an existing code
/// the accepted components are written into it with the new recording time
/// instead of creating a new code.
RecordResult record(Registry& registry, const StimulusSpectrum& stimulus, double t, const SystemParams& params,
                     const std::optional<std::string>& refresh_id = std::nullopt);

/// Removes entries whose mode is dead at t and updates statuses. t must not
/// precede the previous sweep.
void decay_codes(Registry& registry, double t, const SystemParams& params);

/// Cosine similarity of the N-spectra over the union of k supports; 0 if
/// either code is empty.
double similarity(const MemoryCode& a, const MemoryCode& b);

MemoryCode code_from_spectrum(const StimulusSpectrum& spectrum);

/// Best-matching code for a replication signal. Expects the registry to be
/// decayed to t.
RecallResult recall(const Registry& registry, const StimulusSpectrum& signal, double energy, double t,
                    const SystemParams& params);

/// True iff every entry's mode is dead at t (an empty code is forgotten).
bool is_forgotten(const MemoryCode& code, double t, const SystemParams& params);

/// Latest recording window over the code's entries (0 for an empty code).
double forgetting_time(const MemoryCode& code, const SystemParams& params);

/// Spatial extent of a code at t: the longest live wavelength 2 pi / k among
/// its entries (0 when nothing is alive). Bounded above by domain_size(n, t)
/// of each live entry, since a live mode has k >= k~(n, t).
double code_domain_size(const MemoryCode& code, double t, const SystemParams& params);

std::string to_string(CodeStatus status);
std::string to_string(RejectReason reason);
std::string to_string(RecallOutcome outcome);
CodeStatus status_from_string(const std::string& s);

}  // namespace memdomain::memory
