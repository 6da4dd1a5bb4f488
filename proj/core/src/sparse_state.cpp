#include "spinmirror/sparse_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <unordered_map>

#include "spinmirror/errors.hpp"

namespace spinmirror {

namespace {

void check_site_count(std::size_t site_count) {
  if (site_count > static_cast<std::size_t>(kMaxSites)) {
    throw ValidationError("sparse state: at most " + std::to_string(kMaxSites) + " sites supported");
  }
}

void check_same_sites(const SparseState& a, const SparseState& b) {
  if (a.site_count() != b.site_count()) throw ValidationError("sparse state: site counts differ");
}

}  // namespace

SparseState::SparseState(std::size_t site_count) : site_count_(site_count) { check_site_count(site_count); }

SparseState::SparseState(std::size_t site_count, std::vector<Term> terms)
    : site_count_(site_count), terms_(std::move(terms)) {
  check_site_count(site_count);
  for (const auto& [mask, amp] : terms_) {
    if (site_count_ < 64 && (mask >> site_count_) != 0) {
      throw ValidationError("sparse state: mask " + std::to_string(mask) + " exceeds site count");
    }
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) throw ValidationError("sparse state: non-finite amplitude");
  }
  canonicalize();
}

void SparseState::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (out > 0 && terms_[out - 1].first == terms_[i].first) {
      terms_[out - 1].second += terms_[i].second;
    } else {
      terms_[out++] = terms_[i];
    }
  }
  terms_.resize(out);
  std::erase_if(terms_, [](const Term& t) { return t.second == Amplitude{}; });
}

SparseState SparseState::basis(std::size_t site_count, std::uint64_t mask) {
  return SparseState(site_count, {{mask, Amplitude{1.0, 0.0}}});
}

SparseState SparseState::from_sector(const SectorState& state) {
  std::vector<Term> terms;
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    if (state.amplitudes(i) != Amplitude{}) terms.emplace_back(state.basis->unrank(static_cast<std::size_t>(i)), state.amplitudes(i));
  }
  return SparseState(static_cast<std::size_t>(state.basis->site_count()), std::move(terms));
}

Amplitude SparseState::amplitude(std::uint64_t mask) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mask, [](const Term& t, std::uint64_t m) { return t.first < m; });
  if (it != terms_.end() && it->first == mask) return it->second;
  return {};
}

double SparseState::norm() const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::norm(t.second);
  return std::sqrt(sum);
}

SparseState SparseState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ValidationError("sparse state: cannot normalise the zero state");
  SparseState out(*this);
  out *= Amplitude{1.0 / n, 0.0};
  return out;
}

Amplitude SparseState::inner(const SparseState& other) const {
  check_same_sites(*this, other);
  Amplitude acc{};
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < terms_.size() && j < other.terms_.size()) {
    if (terms_[i].first < other.terms_[j].first) {
      ++i;
    } else if (other.terms_[j].first < terms_[i].first) {
      ++j;
    } else {
      acc += std::conj(terms_[i].second) * other.terms_[j].second;
      ++i;
      ++j;
    }
  }
  return acc;
}

std::vector<int> SparseState::sectors() const {
  std::vector<int> out;
  for (const auto& t : terms_) out.push_back(std::popcount(t.first));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SparseState SparseState::sector_component(int excitations) const {
  SparseState out(site_count_);
  for (const auto& t : terms_)
    if (std::popcount(t.first) == excitations) out.terms_.push_back(t);
  return out;
}

SectorState SparseState::to_sector(const BasisPtr& basis) const {
  if (static_cast<std::size_t>(basis->site_count()) != site_count_) throw ValidationError("sparse state: basis site count differs");
  SectorState out{basis, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()))};
  for (const auto& [mask, amp] : terms_) {
    if (!basis->contains(mask)) throw ValidationError("sparse state: support leaves the requested sector");
    out.amplitudes(static_cast<Eigen::Index>(basis->rank(mask))) = amp;
  }
  return out;
}

SparseState SparseState::permuted(const SymmetryMap& sym) const {
  if (sym.site_count() != site_count_) throw ValidationError("sparse state: symmetry size differs");
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& [mask, amp] : terms_) terms.emplace_back(sym.apply_to_mask(mask), amp);
  return SparseState(site_count_, std::move(terms));
}

SparseState SparseState::embedded(std::size_t site_count, std::span<const std::size_t> positions) const {
  if (positions.size() != site_count_) throw ValidationError("sparse state: embedding needs one position per site");
  for (auto p : positions)
    if (p >= site_count) throw ValidationError("sparse state: embedding position out of range");
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& [mask, amp] : terms_) {
    std::uint64_t out = 0;
    for (std::size_t p = 0; p < site_count_; ++p)
      if ((mask >> p) & 1U) out |= std::uint64_t{1} << positions[p];
    terms.emplace_back(out, amp);
  }
  return SparseState(site_count, std::move(terms));
}

SparseState SparseState::tensor(const SparseState& other) const {
  check_same_sites(*this, other);
  std::uint64_t used_a = 0;
  std::uint64_t used_b = 0;
  for (const auto& t : terms_) used_a |= t.first;
  for (const auto& t : other.terms_) used_b |= t.first;
  if ((used_a & used_b) != 0) throw ValidationError("sparse state: tensor factors overlap");
  std::vector<Term> terms;
  terms.reserve(terms_.size() * other.terms_.size());
  for (const auto& [ma, aa] : terms_)
    for (const auto& [mb, ab] : other.terms_) terms.emplace_back(ma | mb, aa * ab);
  return SparseState(site_count_, std::move(terms));
}

SparseState SparseState::pruned(double threshold) const {
  SparseState out(site_count_);
  for (const auto& t : terms_)
    if (std::abs(t.second) > threshold) out.terms_.push_back(t);
  return out;
}

SparseState& SparseState::operator+=(const SparseState& other) {
  check_same_sites(*this, other);
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

SparseState& SparseState::operator-=(const SparseState& other) {
  check_same_sites(*this, other);
  for (const auto& [mask, amp] : other.terms_) terms_.emplace_back(mask, -amp);
  canonicalize();
  return *this;
}

SparseState& SparseState::operator*=(Amplitude factor) {
  for (auto& t : terms_) t.second *= factor;
  return *this;
}

SparseState apply_hamiltonian(const ExchangeGraph& graph, const SparseState& state) {
  if (graph.site_count() != state.site_count()) {
    throw ValidationError("apply_hamiltonian: graph has " + std::to_string(graph.site_count()) + " sites, state has " +
                          std::to_string(state.site_count()));
  }
  std::unordered_map<std::uint64_t, Amplitude> acc;
  acc.reserve(state.support_size() * 2);
  for (const auto& [mask, amp] : state.terms()) {
    for (const auto& e : graph.edges()) {
      if (e.strength == 0.0) continue;
      const std::uint64_t pair = (std::uint64_t{1} << e.a) | (std::uint64_t{1} << e.b);
      const std::uint64_t occ = mask & pair;
      if (occ == 0 || occ == pair) continue;
      acc[mask ^ pair] += 2.0 * e.strength * amp;
    }
  }
  std::vector<SparseState::Term> terms(acc.begin(), acc.end());
  return SparseState(state.site_count(), std::move(terms));
}

}  // namespace spinmirror
