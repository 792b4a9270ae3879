// Compares the OpenMP kernels against their serial reference
// implementations on a medium-sized symbolic workload and reports wall
// times.  The outputs are also cross-checked for equality, so this
// doubles as a stress test of the deterministic parallel assembly.

#include <chrono>
#include <iostream>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include <dgv/groupoid.hpp>

using namespace dgv;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

DiracFrame random_bivector_frame(const Chart& c, std::uint64_t seed) {
  RationalSampler s(seed);
  Bivector b = Bivector::zero(c);
  for (auto& u : b.upper) {
    Polynomial p(c.dim());
    for (int t = 0; t < 3; ++t) {
      Monomial m(c.dim(), 0);
      m[static_cast<size_t>(s.next().numerator().get_ui()) % c.dim()] =
          1 + static_cast<unsigned>(s.next().numerator().get_ui()) % 2;
      p.add_term(m, s.next());
    }
    u = RF::from_polynomial(p);
  }
  PointP w{c, {}};
  for (int i = 0; i < c.dim(); ++i) w.coords.push_back(Rational(i + 1));
  return from_bivector(b, w, "bench");
}

}  // namespace

int main() {
#if defined(_OPENMP)
  std::cout << "OpenMP enabled, max threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "OpenMP not available; both runs are serial\n";
#endif

  {
    // Courant 3-tensor of the pair Dirac structure of a random bivector
    // graph on R^3: 6^3 = 216 symbolic Dorfman brackets on a 6-dim chart
    Chart m{"M", {"x", "y", "z"}};
    PairDirac pd = pair_dirac(random_bivector_frame(m, 2024));
    std::cout << "courant-tensor kernel on dim " << pd.def.n() << " ("
              << pd.def.n() * pd.def.n() * pd.def.n() << " cells)\n";
    auto t0 = clock_type::now();
    CourantTensor serial = courant_tensor_serial(pd.frame);
    double ts = seconds_since(t0);
    t0 = clock_type::now();
    CourantTensor parallel = courant_tensor(pd.frame);
    double tp = seconds_since(t0);
    bool same = serial.closed == parallel.closed && serial.entries.size() == parallel.entries.size();
    for (size_t i = 0; same && i < serial.entries.size(); ++i)
      same = serial.entries[i] == parallel.entries[i];
    std::cout << "  serial:   " << ts << " s\n"
              << "  parallel: " << tp << " s  (speedup " << (tp > 0 ? ts / tp : 0.0) << "x)\n"
              << "  outputs identical: " << (same ? "yes" : "NO") << "\n";
  }

  {
    // multiplicativity sampling on the pair Dirac groupoid of R^2
    Chart m{"M", {"x", "y"}};
    PairDirac pd = pair_dirac(random_bivector_frame(m, 7));
    const int samples = 40;
    std::cout << "multiplicativity kernel, " << samples << " exact samples\n";
    auto t0 = clock_type::now();
    Report serial = check_dirac_multiplicative_serial(pd.def, pd.frame, samples, 99);
    double ts = seconds_since(t0);
    t0 = clock_type::now();
    Report parallel = check_dirac_multiplicative(pd.def, pd.frame, samples, 99);
    double tp = seconds_since(t0);
    std::cout << "  serial:   " << ts << " s\n"
              << "  parallel: " << tp << " s  (speedup " << (tp > 0 ? ts / tp : 0.0) << "x)\n"
              << "  reports identical: " << (serial.json() == parallel.json() ? "yes" : "NO")
              << "\n";
  }
  return 0;
}
