#include "memdomain/memory_codes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "memdomain/errors.hpp"
#include "memdomain/lifetime.hpp"

namespace memdomain::memory {

void StimulusSpectrum::validate() const {
  std::set<double> seen;
  for (const auto& c : components) {
    ModeIndex{c.k, c.n}.validate();
    if (!std::isfinite(c.intensity) || c.intensity < 0.0) {
      throw DomainError("stimulus intensity must be finite and >= 0");
    }
    if (!seen.insert(c.k).second) throw DomainError("stimulus repeats momentum k = " + std::to_string(c.k));
  }
}

const MemoryCode* Registry::find(const std::string& id) const {
  for (const auto& c : codes) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

MemoryCode* Registry::find(const std::string& id) {
  for (auto& c : codes) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

RecordResult record(Registry& registry, const StimulusSpectrum& stimulus, double t, const SystemParams& params,
                    const std::optional<std::string>& refresh_id) {
  params.validate();
  stimulus.validate();
  if (!std::isfinite(t) || t < 0.0) throw DomainError("recording time must be finite and >= 0");
  MemoryCode* target = nullptr;
  if (refresh_id) {
    target = registry.find(*refresh_id);
    if (!target) throw DomainError("no code with id '" + *refresh_id + "' to refresh");
  }

  RecordResult result;
  std::map<double, CodeEntry> accepted;
  for (const auto& c : stimulus.components) {
    const ModeIndex mode{c.k, c.n};
    if (2.0 * params.omega0(c.k) < params.L) {
      result.rejected.push_back({c, RejectReason::BelowThreshold});
    } else if (!mode_alive(params, mode, t)) {
      result.rejected.push_back({c, RejectReason::WindowClosed});
    } else {
      accepted[c.k] = CodeEntry{c.intensity, c.n, t};
    }
  }
  if (accepted.empty()) return result;

  if (target) {
    for (const auto& [k, entry] : accepted) target->entries[k] = entry;
    target->status = CodeStatus::Intact;
    result.code_id = target->id;
    result.refreshed = true;
    return result;
  }
  char id[32];
  std::snprintf(id, sizeof id, "code-%04llu", static_cast<unsigned long long>(registry.next_id++));
  registry.codes.push_back(MemoryCode{id, std::move(accepted), CodeStatus::Intact});
  result.code_id = registry.codes.back().id;
  return result;
}

void decay_codes(Registry& registry, double t, const SystemParams& params) {
  params.validate();
  if (!std::isfinite(t) || t < 0.0) throw DomainError("decay time must be finite and >= 0");
  if (t < registry.clock) {
    throw DomainError("decay time " + std::to_string(t) + " precedes the previous sweep at " +
                      std::to_string(registry.clock));
  }
  registry.clock = t;
  for (auto& code : registry.codes) {
    const std::size_t before = code.entries.size();
    std::erase_if(code.entries, [&](const auto& kv) { return !mode_alive(params, ModeIndex{kv.first, kv.second.n}, t); });
    if (code.entries.empty()) {
      code.status = CodeStatus::Forgotten;
    } else if (code.entries.size() < before) {
      code.status = CodeStatus::Degraded;
    }
  }
}

double similarity(const MemoryCode& a, const MemoryCode& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [k, e] : a.entries) {
    na += e.intensity * e.intensity;
    if (auto it = b.entries.find(k); it != b.entries.end()) dot += e.intensity * it->second.intensity;
  }
  for (const auto& [k, e] : b.entries) nb += e.intensity * e.intensity;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

MemoryCode code_from_spectrum(const StimulusSpectrum& spectrum) {
  spectrum.validate();
  MemoryCode code;
  for (const auto& c : spectrum.components) code.entries[c.k] = CodeEntry{c.intensity, c.n, 0.0};
  return code;
}

RecallResult recall(const Registry& registry, const StimulusSpectrum& signal, double energy, double t,
                    const SystemParams& params) {
  params.validate();
  if (!std::isfinite(energy)) throw DomainError("energy must be finite");
  const MemoryCode probe = code_from_spectrum(signal);
  RecallResult result;
  const MemoryCode* best = nullptr;
  for (const auto& code : registry.codes) {
    const double s = similarity(probe, code);
    if (s > result.score) {
      result.score = s;
      best = &code;
    }
  }
  if (!best || result.score < kMatchThreshold) {
    result.outcome = RecallOutcome::NoMatch;
    return result;
  }
  result.matched = best->id;
  int n_min = -1;
  for (const auto& [k, e] : best->entries) {
    if (probe.entries.count(k) && (n_min < 0 || e.n < n_min)) n_min = e.n;
  }
  result.energy_threshold = params.c * momentum_threshold(params, n_min, t);
  result.outcome = energy >= result.energy_threshold ? RecallOutcome::Recalled : RecallOutcome::DifficultyRecalling;
  return result;
}

bool is_forgotten(const MemoryCode& code, double t, const SystemParams& params) {
  return std::none_of(code.entries.begin(), code.entries.end(), [&](const auto& kv) {
    return mode_alive(params, ModeIndex{kv.first, kv.second.n}, t);
  });
}

double forgetting_time(const MemoryCode& code, const SystemParams& params) {
  double latest = 0.0;
  for (const auto& [k, e] : code.entries) latest = std::max(latest, recording_window(params, ModeIndex{k, e.n}));
  return latest;
}

double code_domain_size(const MemoryCode& code, double t, const SystemParams& params) {
  double extent = 0.0;
  for (const auto& [k, e] : code.entries) {
    if (mode_alive(params, ModeIndex{k, e.n}, t)) extent = std::max(extent, 2.0 * std::numbers::pi / k);
  }
  return extent;
}

std::string to_string(CodeStatus status) {
  switch (status) {
    case CodeStatus::Intact: return "Intact";
    case CodeStatus::Degraded: return "Degraded";
    case CodeStatus::Forgotten: return "Forgotten";
  }
  return "?";
}

std::string to_string(RejectReason reason) {
  return reason == RejectReason::BelowThreshold ? "BelowThreshold" : "WindowClosed";
}

std::string to_string(RecallOutcome outcome) {
  switch (outcome) {
    case RecallOutcome::Recalled: return "Recalled";
    case RecallOutcome::DifficultyRecalling: return "DifficultyRecalling";
    case RecallOutcome::NoMatch: return "NoMatch";
  }
  return "?";
}

CodeStatus status_from_string(const std::string& s) {
  if (s == "Intact") return CodeStatus::Intact;
  if (s == "Degraded") return CodeStatus::Degraded;
  if (s == "Forgotten") return CodeStatus::Forgotten;
  throw DomainError("unknown code status '" + s + "'");
}

}  // namespace memdomain::memory
