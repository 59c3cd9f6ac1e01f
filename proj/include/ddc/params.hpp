#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace ddc {

struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FieldPair {
  double h_s = 0.0;
  double h_d = 0.0;
};

/// Couplings and fields of the coupled double-chain Hamiltonian.
/// Energies in units of J_s, times in t0 = hbar/J_s.
struct SystemParams {
  int L = 2;
  double J_s = 1.0;
  double J_d = 0.0;
  double h_s = 0.0;   // uniform transverse magnetic field
  double h_d = 0.0;   // uniform transverse electric field
  double C = 0.0;     // on-site magnetoelectric coupling
  std::map<int, FieldPair> site_overrides;  // 1-based site -> fields

  void validate() const;

  // Per-site fields, 1-based.
  double h_s_at(int site) const;
  double h_d_at(int site) const;

  bool has_overrides() const { return !site_overrides.empty(); }

  /// Copy with overrides dropped (uniform fields everywhere).
  SystemParams without_overrides() const;

  std::string to_json() const;
  static SystemParams from_json(const std::string& text);
  static SystemParams load_file(const std::string& path);
};

}  // namespace ddc
