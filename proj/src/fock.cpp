#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <map>

#include "wedgefield/freefield.hpp"

namespace wedgefield {

namespace {

/// Occupation basis of the truncated Fock space: sorted mode multisets.
struct FockBasis {
  std::vector<std::vector<int>> states;
  std::map<std::vector<int>, int> index;
  std::vector<FourVector> momentum;

  FockBasis(const std::vector<FourVector>& modes, int maxParticles) {
    std::vector<int> cur;
    add(cur, modes);
    std::vector<std::size_t> frontier{0};
    for (int n = 1; n <= maxParticles; ++n) {
      std::vector<std::size_t> next;
      for (std::size_t s : frontier) {
        const int start = states[s].empty() ? 0 : states[s].back();
        for (int a = start; a < static_cast<int>(modes.size()); ++a) {
          std::vector<int> st = states[s];
          st.push_back(a);
          next.push_back(add(st, modes));
          if (states.size() > kFockDimensionLimit)
            throw LatticeTooLarge("truncated Fock space exceeds the dimension limit");
        }
      }
      frontier = std::move(next);
    }
  }

  std::size_t add(const std::vector<int>& st, const std::vector<FourVector>& modes) {
    FourVector p = FourVector::Zero();
    for (int a : st) p += modes[a];
    index.emplace(st, static_cast<int>(states.size()));
    states.push_back(st);
    momentum.push_back(p);
    return states.size() - 1;
  }

  int find(const std::vector<int>& st) const {
    auto it = index.find(st);
    return it == index.end() ? -1 : it->second;
  }
};

using SparseC = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// sum_a sqrt(w_a) (f~(q_a) a_a T_-(q_a) + f~(-q_a) a_a^dagger T_+(q_a)),
/// T_pm(p) = exp(-+ i/2 p theta P).
SparseC smearedField(const TestFunction& f, const NoncommMatrix& theta, const FockBasis& basis,
                     const std::vector<FourVector>& modes, const std::vector<double>& weights,
                     int maxParticles) {
  const int dim = static_cast<int>(basis.states.size());
  std::vector<Complex> fPlus(modes.size()), fMinus(modes.size());
  for (std::size_t a = 0; a < modes.size(); ++a) {
    fPlus[a] = std::sqrt(weights[a]) * fourier(f, modes[a]);
    fMinus[a] = std::sqrt(weights[a]) * fourier(f, FourVector(-modes[a]));
  }
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int s = 0; s < dim; ++s) {
    const auto& st = basis.states[s];
    const FourVector& ps = basis.momentum[s];
    for (std::size_t k = 0; k < st.size(); ++k) {
      if (k > 0 && st[k] == st[k - 1]) continue;
      const int a = st[k];
      const int occ = static_cast<int>(std::count(st.begin(), st.end(), a));
      std::vector<int> down = st;
      down.erase(down.begin() + k);
      const double phase = 0.5 * thetaBilinear(theta, modes[a], ps);
      trip.emplace_back(basis.find(down), s, fPlus[a] * std::sqrt(double(occ)) * std::polar(1.0, phase));
    }
    if (static_cast<int>(st.size()) >= maxParticles) continue;
    for (std::size_t a = 0; a < modes.size(); ++a) {
      std::vector<int> up = st;
      up.insert(std::upper_bound(up.begin(), up.end(), static_cast<int>(a)), static_cast<int>(a));
      const int occ = static_cast<int>(std::count(up.begin(), up.end(), static_cast<int>(a)));
      const double phase = -0.5 * thetaBilinear(theta, modes[a], ps);
      trip.emplace_back(basis.find(up), s, fMinus[a] * std::sqrt(double(occ)) * std::polar(1.0, phase));
    }
  }
  SparseC m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

bool uniformTwist(const TwistedTensor& t, NoncommMatrix& out) {
  if (!t.isPhase()) return false;
  out = t.degree() >= 2 ? t.pairTwist(0, 1) : NoncommMatrix();
  for (int l = 0; l < t.degree(); ++l)
    for (int r = l + 1; r < t.degree(); ++r)
      if (!(t.pairTwist(l, r) == out)) return false;
  return true;
}

}  // namespace

Complex fockOracle(const TensorPoly& f, const NoncommMatrix& theta, const ShellLattice& lattice,
                   double mass) {
  std::vector<FourVector> modes;
  std::vector<double> weights;
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    modes.push_back(onShell(mass, lattice.momenta[a]));
    weights.push_back(lattice.weights[a] * 2 * M_PI / (2 * modes.back()(0)));
  }
  Complex total = 0;
  std::map<int, std::unique_ptr<FockBasis>> bases;
  for (const auto& term : f.terms) {
    const int n = term.degree();
    if (n == 0) {
      total += term.coefficient();
      continue;
    }
    if (n % 2 == 1) continue;
    NoncommMatrix own;
    if (!uniformTwist(term, own))
      throw Unsupported("fockOracle needs a uniform phase twist on each term");
    const int maxParticles = n / 2;
    auto& basis = bases[maxParticles];
    if (!basis) basis = std::make_unique<FockBasis>(modes, maxParticles);
    const NoncommMatrix th = theta + own;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis->states.size());
    psi(0) = 1;
    for (int j = n - 1; j >= 0; --j)
      psi = smearedField(term.factor(j), th, *basis, modes, weights, maxParticles) * psi;
    total += term.coefficient() * psi(0);
  }
  return total;
}

}  // namespace wedgefield
