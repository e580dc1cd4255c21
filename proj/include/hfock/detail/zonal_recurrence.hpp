#pragma once

#include <vector>

namespace hfock::detail {

/// 𝒴_0(u), ..., 𝒴_{m_max}(u) where u = ⟨ξ,η⟩ for unit ξ, η in ℝⁿ.
/// n = 2 uses 2T_k; otherwise 𝒴_k = (k+λ)/λ · C_k^λ with λ = n/2 − 1.
template <class Real>
void zonal_values(int n, int m_max, Real u, std::vector<Real>& out) {
  out.assign(static_cast<std::size_t>(m_max) + 1, Real(0));
  out[0] = Real(1);
  if (m_max == 0) return;
  if (n == 2) {
    Real t_prev = Real(1);
    Real t = u;
    out[1] = Real(2) * t;
    for (int k = 2; k <= m_max; ++k) {
      const Real t_next = Real(2) * u * t - t_prev;
      t_prev = t;
      t = t_next;
      out[k] = Real(2) * t;
    }
    return;
  }
  const Real lambda = Real(n - 2) / Real(2);
  Real c_prev = Real(1);
  Real c = Real(2) * lambda * u;
  out[1] = (Real(1) + lambda) / lambda * c;
  for (int k = 2; k <= m_max; ++k) {
    const Real c_next =
        (Real(2) * (Real(k) + lambda - Real(1)) * u * c - (Real(k) + Real(2) * lambda - Real(2)) * c_prev) /
        Real(k);
    c_prev = c;
    c = c_next;
    out[k] = (Real(k) + lambda) / lambda * c;
  }
}

}  // namespace hfock::detail
