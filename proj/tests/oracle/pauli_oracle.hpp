#pragma once

// Brute-force references built from Pauli matrices, independent of the
// hopping rule used by the library.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Pauli = std::array<std::array<cplx, 2>, 2>;

inline const Pauli kX{{{cplx{0, 0}, cplx{1, 0}}, {cplx{1, 0}, cplx{0, 0}}}};
inline const Pauli kY{{{cplx{0, 0}, cplx{0, -1}}, {cplx{0, 1}, cplx{0, 0}}}};
inline const Pauli kI{{{cplx{1, 0}, cplx{0, 0}}, {cplx{0, 0}, cplx{1, 0}}}};

struct Coupling {
  std::size_t a;
  std::size_t b;
  double w;
};

/// Sparse full-space operator: (row, col) -> value.
using SparseOp = std::map<std::pair<std::uint64_t, std::uint64_t>, cplx>;

/// Action of the two-site Pauli string P_a P_b on basis state |x>, computed
/// one qubit at a time from the 2x2 matrices. Bit p of x is qubit p.
inline void add_two_site_term(SparseOp& op, std::uint64_t x, std::size_t a, std::size_t b, const Pauli& p, double w) {
  for (int oa = 0; oa < 2; ++oa) {
    for (int ob = 0; ob < 2; ++ob) {
      const int ia = static_cast<int>((x >> a) & 1U);
      const int ib = static_cast<int>((x >> b) & 1U);
      const cplx amp = p[oa][ia] * p[ob][ib];
      if (amp == cplx{}) continue;
      std::uint64_t y = x;
      y = (y & ~(std::uint64_t{1} << a)) | (static_cast<std::uint64_t>(oa) << a);
      y = (y & ~(std::uint64_t{1} << b)) | (static_cast<std::uint64_t>(ob) << b);
      op[{y, x}] += w * amp;
    }
  }
}

enum class Part { both, xx_only, yy_only };

/// sum_e w_e (X_a X_b + Y_a Y_b) on `sites` qubits (<= 12).
inline SparseOp full_hamiltonian(std::size_t sites, const std::vector<Coupling>& couplings, Part part = Part::both) {
  SparseOp op;
  const std::uint64_t dim = std::uint64_t{1} << sites;
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (const auto& c : couplings) {
      if (part != Part::yy_only) add_two_site_term(op, x, c.a, c.b, kX, c.w);
      if (part != Part::xx_only) add_two_site_term(op, x, c.a, c.b, kY, c.w);
    }
  }
  return op;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXcd to_matrix(const Pauli& p) {
  Eigen::MatrixXcd m(2, 2);
  m << p[0][0], p[0][1], p[1][0], p[1][1];
  return m;
}

/// Dense 2^M Kronecker-product Hamiltonian for M <= 4. The tensor factors
/// are ordered so that the basis index equals the occupation bitmask
/// (qubit 0 is the least significant, rightmost factor).
inline Eigen::MatrixXcd dense_kron_hamiltonian(std::size_t sites, const std::vector<Coupling>& couplings,
                                               Part part = Part::both) {
  const auto dim = static_cast<Eigen::Index>(1) << sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  auto string = [&](std::size_t a, std::size_t b, const Pauli& p) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t q = sites; q-- > 0;) m = kron(m, to_matrix(q == a || q == b ? p : kI));
    return m;
  };
  for (const auto& c : couplings) {
    if (part != Part::yy_only) h += c.w * string(c.a, c.b, kX);
    if (part != Part::xx_only) h += c.w * string(c.a, c.b, kY);
  }
  return h;
}

}  // namespace oracle
