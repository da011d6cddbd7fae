#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spinpair/relaxation.hpp"

using namespace spinpair;

namespace {

const SpinSystem kSys = SpinSystem::proton_carbon();

constexpr double kFastTime = 2.4;  // s, flip-flop family target
constexpr double kSlowTime = 3.0;  // s, aligned family target

Eigen::Vector3d as_vec(const DiagObservables& o) {
  return Eigen::Vector3d(o.s1z, o.s2z, o.s1zs2z);
}

// generic, non-degenerate positive definite generator for algorithm tests
RateMatrix generic_rates() {
  RateMatrix r;
  r.mu1 = 0.8;
  r.mu2 = 0.25;
  r.mu12 = 0.5;
  r.sigma12 = 0.1;
  r.delta1 = 0.15;
  r.delta2 = -0.08;
  return r;
}

double log_rms_vs_single_exponential(const DecayCurve& curve,
                                     const ExpFit& fit) {
  double acc = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < curve.times_s.size(); ++k) {
    const double model =
        fit.amplitude * std::exp(-curve.times_s[k] / fit.tau);
    const double d = std::log(std::max(curve.values[k], 1e-12)) -
                     std::log(model);
    acc += d * d;
    ++n;
  }
  return std::sqrt(acc / n);
}

}  // namespace

TEST_SUITE("relaxation") {
  TEST_CASE("rate matrix layout is symmetric") {
    const RateMatrix r = generic_rates();
    const Eigen::Matrix3d m = r.matrix();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m(0, 0) == r.mu1);
    CHECK(m(1, 1) == r.mu2);
    CHECK(m(2, 2) == r.mu12);
    CHECK(m(0, 1) == r.sigma12);
    CHECK(m(0, 2) == r.delta1);
    CHECK(m(1, 2) == r.delta2);
  }

  TEST_CASE("indefinite generators are rejected") {
    RateMatrix r = generic_rates();
    CHECK_NOTHROW(r.validate());
    r.delta1 = 0.9;  // overwhelms the diagonal
    CHECK_THROWS_AS(r.validate(), ValidationError);
    RateMatrix zero;
    CHECK_THROWS_AS(zero.validate(), ValidationError);
  }

  TEST_CASE("calibrated set reproduces the two pinned decay times") {
    const RateMatrix r = RateMatrix::calibrated(kSys);
    CHECK(r.mu12 ==
          doctest::Approx(0.5 * (1.0 / kFastTime + 1.0 / kSlowTime))
              .epsilon(1e-14));
    const double eps1 = kSys.polarization1();
    const double eps2 = kSys.polarization2();
    const double weighted =
        (r.delta1 * eps1 + r.delta2 * eps2) / (eps1 + eps2);
    CHECK(weighted ==
          doctest::Approx((1.0 / kFastTime - 1.0 / kSlowTime) / 16.0)
              .epsilon(1e-14));
    CHECK_NOTHROW(r.validate());
  }

  TEST_CASE("eigenvalues agree with the closed-form cubic") {
    for (const RateMatrix& r :
         {generic_rates(), RateMatrix::calibrated(kSys)}) {
      const Eigenmodes modes = eigenmodes(r);
      const auto closed = oracles::symmetric3_eigenvalues(r.matrix());
      for (int k = 0; k < 3; ++k) {
        CHECK(modes.rates(k) == doctest::Approx(closed[k]).epsilon(1e-12));
      }
      // eigenvectors orthonormal and actually eigen
      CHECK((modes.vectors * modes.vectors.transpose() -
             Eigen::Matrix3d::Identity())
                .cwiseAbs()
                .maxCoeff() < 1e-13);
      CHECK((r.matrix() * modes.vectors -
             modes.vectors * modes.rates.asDiagonal().toDenseMatrix())
                .cwiseAbs()
                .maxCoeff() < 1e-13);
    }
  }

  TEST_CASE("Bell initial conditions carry only two-spin order") {
    const double q = kSys.pseudo_pure_scale() / 4.0;
    for (BellKind kind : {BellKind::singlet, BellKind::triplet0}) {
      const DiagObservables obs = bell_initial_conditions(kind, kSys);
      CHECK(obs.s1z == 0.0);
      CHECK(obs.s2z == 0.0);
      CHECK(obs.s1zs2z == doctest::Approx(-q).epsilon(1e-14));
    }
    for (BellKind kind : {BellKind::psi_plus, BellKind::psi_minus}) {
      CHECK(bell_initial_conditions(kind, kSys).s1zs2z ==
            doctest::Approx(q).epsilon(1e-14));
    }
  }

  TEST_CASE("diagonal state embeds the three observables faithfully") {
    const DiagObservables obs{3e-5, -1e-5, 2e-6};
    const DensityMatrix rho = diag_state(obs);
    CHECK(rho.trace_error() < 1e-15);
    CHECK(expectation(rho, spin_operator(1, Axis3::z)) ==
          doctest::Approx(obs.s1z).epsilon(1e-12));
    CHECK(expectation(rho, spin_operator(2, Axis3::z)) ==
          doctest::Approx(obs.s2z).epsilon(1e-12));
    const Matrix4c zz =
        spin_operator(1, Axis3::z) * spin_operator(2, Axis3::z);
    CHECK(expectation(rho, zz) ==
          doctest::Approx(obs.s1zs2z).epsilon(1e-12));
    // and nothing off-diagonal
    CHECK(max_abs(rho.mat -
                  rho.mat.diagonal().asDiagonal().toDenseMatrix()) == 0.0);
  }

  TEST_CASE("evolution fixes time zero and the equilibrium point") {
    const RateMatrix r = generic_rates();
    const DiagObservables obs0{2e-5, 1e-5, -3e-6};
    const DiagObservables same = relax_evolve(obs0, r, kSys, 0.0);
    CHECK((as_vec(same) - as_vec(obs0)).cwiseAbs().maxCoeff() < 1e-18);
    const DiagObservables late = relax_evolve(obs0, r, kSys, 200.0);
    CHECK(late.s1z == doctest::Approx(kSys.polarization1()).epsilon(1e-9));
    CHECK(late.s2z == doctest::Approx(kSys.polarization2()).epsilon(1e-9));
    CHECK(std::abs(late.s1zs2z) < 1e-12 * kSys.polarization1());
    CHECK_THROWS_AS(relax_evolve(obs0, r, kSys, -0.1), ValidationError);
  }

  TEST_CASE("evolution composes as a semigroup") {
    const RateMatrix r = generic_rates();
    const DiagObservables obs0{2e-5, -4e-5, 5e-6};
    const DiagObservables direct = relax_evolve(obs0, r, kSys, 3.7);
    const DiagObservables stepped =
        relax_evolve(relax_evolve(obs0, r, kSys, 1.3), r, kSys, 2.4);
    CHECK((as_vec(direct) - as_vec(stepped)).cwiseAbs().maxCoeff() < 1e-18);
  }

  TEST_CASE("uncoupled channels decay with their own plain exponentials") {
    RateMatrix r;
    r.mu1 = 0.7;
    r.mu2 = 0.2;
    r.mu12 = 0.45;
    const DiagObservables obs0{5e-5, 4e-5, -6e-6};
    const double eps1 = kSys.polarization1();
    const double eps2 = kSys.polarization2();
    for (double tau : {0.3, 1.7, 6.0}) {
      const DiagObservables obs = relax_evolve(obs0, r, kSys, tau);
      CHECK(obs.s1z ==
            doctest::Approx(eps1 + (obs0.s1z - eps1) * std::exp(-0.7 * tau))
                .epsilon(1e-12));
      CHECK(obs.s2z ==
            doctest::Approx(eps2 + (obs0.s2z - eps2) * std::exp(-0.2 * tau))
                .epsilon(1e-12));
      CHECK(obs.s1zs2z ==
            doctest::Approx(obs0.s1zs2z * std::exp(-0.45 * tau))
                .epsilon(1e-12));
    }
  }

  TEST_CASE("short-time slope matches the generator") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> amp(-5e-5, 5e-5);
    const RateMatrix r = generic_rates();
    const Eigen::Vector3d veq(kSys.polarization1(), kSys.polarization2(),
                              0.0);
    int accepted = 0;
    while (accepted < 10) {
      const DiagObservables obs0{amp(rng), amp(rng), amp(rng)};
      const Eigen::Vector3d rhs = -r.matrix() * (as_vec(obs0) - veq);
      // keep draws where every component is resolvable against the norm,
      // so the relative comparison below is well conditioned
      if (rhs.cwiseAbs().minCoeff() <
          1e-3 * rhs.cwiseAbs().maxCoeff()) {
        continue;
      }
      ++accepted;
      const double h = 1e-6;
      const Eigen::Vector3d fwd =
          as_vec(relax_evolve(obs0, r, kSys, h));
      const Eigen::Vector3d slope =
          (fwd - as_vec(obs0)) / h;  // first-order in h
      for (int k = 0; k < 3; ++k) {
        CHECK(slope(k) == doctest::Approx(rhs(k)).epsilon(1e-4));
      }
    }
  }

  TEST_CASE("initial decay rates of the two Bell families") {
    const RateMatrix r = RateMatrix::calibrated(kSys);
    const double fast = initial_rate(
        r, bell_initial_conditions(BellKind::singlet, kSys), kSys);
    const double slow = initial_rate(
        r, bell_initial_conditions(BellKind::psi_plus, kSys), kSys);
    CHECK(fast == doctest::Approx(1.0 / kFastTime).epsilon(1e-13));
    CHECK(slow == doctest::Approx(1.0 / kSlowTime).epsilon(1e-13));
    // the central-triplet shares the singlet's rate, psi- the psi+'s
    CHECK(initial_rate(r, bell_initial_conditions(BellKind::triplet0, kSys),
                       kSys) == doctest::Approx(fast).epsilon(1e-13));
    CHECK(initial_rate(
              r, bell_initial_conditions(BellKind::psi_minus, kSys), kSys) ==
          doctest::Approx(slow).epsilon(1e-13));
    CHECK_THROWS_AS(initial_rate(r, DiagObservables{1e-5, 0.0, 0.0}, kSys),
                    ValidationError);
  }

  TEST_CASE("family rate sum and difference isolate the generator entries") {
    // sum: 2 mu12 for any generator; difference: the polarization-weighted
    // cross-correlation combination -- exact algebraic identities
    for (const RateMatrix& r :
         {RateMatrix::calibrated(kSys), generic_rates()}) {
      const double fast = initial_rate(
          r, bell_initial_conditions(BellKind::triplet0, kSys), kSys);
      const double slow = initial_rate(
          r, bell_initial_conditions(BellKind::psi_minus, kSys), kSys);
      CHECK(fast + slow == doctest::Approx(2.0 * r.mu12).epsilon(1e-13));
      const double eps1 = kSys.polarization1();
      const double eps2 = kSys.polarization2();
      const double expected_diff =
          16.0 * (r.delta1 * eps1 + r.delta2 * eps2) / (eps1 + eps2);
      CHECK(fast - slow == doctest::Approx(expected_diff).epsilon(1e-13));
    }
  }

  TEST_CASE("mode rates are recoverable from sampled decays") {
    const RateMatrix r = generic_rates();
    // start away from all eigenvectors so every mode is excited
    const DiagObservables obs0{6e-5, 3e-5, 2e-5};
    const double dt = 0.25;
    std::vector<double> samples;
    for (int k = 0; k <= 96; ++k) {
      const DiagObservables obs = relax_evolve(obs0, r, kSys, k * dt);
      samples.push_back(obs.s1zs2z);
    }
    const std::vector<double> rates = oracles::prony_rates(samples, dt, 3);
    const Eigenmodes modes = eigenmodes(r);
    for (int k = 0; k < 3; ++k) {
      CHECK(rates[k] == doctest::Approx(modes.rates(k)).epsilon(1e-6));
    }
  }

  TEST_CASE("decay curves start at one and fall monotonically at first") {
    const RateMatrix r = RateMatrix::calibrated(kSys);
    for (BellKind kind : {BellKind::singlet, BellKind::psi_plus}) {
      const DecayCurve curve =
          simulate_decay(kind, r, kSys, default_tau_grid(6.0, 0.5));
      REQUIRE(curve.times_s.size() == 13);
      CHECK(curve.values[0] == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t k = 1; k < curve.values.size(); ++k) {
        CHECK(curve.values[k] < curve.values[k - 1]);
        CHECK(curve.values[k] > 0.0);
      }
    }
  }

  TEST_CASE("spectral readout tracks the two-spin order exactly") {
    // the z polarizations relax too, but their contribution is symmetric
    // and cancels out of the window difference, so the curve must equal
    // the normalized |<S1zS2z>| from the three-channel solution
    const RateMatrix r = RateMatrix::calibrated(kSys);
    const std::vector<double> taus = {0.0, 0.5, 1.5, 4.0, 9.0, 16.0};
    const DecayCurve curve = simulate_decay(BellKind::singlet, r, kSys, taus);
    const DiagObservables obs0 =
        bell_initial_conditions(BellKind::singlet, kSys);
    for (std::size_t k = 0; k < taus.size(); ++k) {
      const double q = relax_evolve(obs0, r, kSys, taus[k]).s1zs2z;
      CHECK(curve.values[k] ==
            doctest::Approx(std::abs(q / obs0.s1zs2z)).epsilon(1e-9));
    }
  }

  TEST_CASE("fitted initial decay times land near the pinned targets") {
    const RateMatrix r = RateMatrix::calibrated(kSys);
    const std::vector<double> taus = default_tau_grid(6.0, 0.5);
    const ExpFit fast = fit_initial_exponential(
        simulate_decay(BellKind::singlet, r, kSys, taus), 6.0);
    const ExpFit slow = fit_initial_exponential(
        simulate_decay(BellKind::psi_minus, r, kSys, taus), 6.0);
    // multi-exponential mixing pulls the 6-second window fits a couple of
    // percent off the tau = 0 slopes; both stay within 5%
    CHECK(std::abs(fast.tau / kFastTime - 1.0) < 0.05);
    CHECK(std::abs(slow.tau / kSlowTime - 1.0) < 0.05);
    CHECK(fast.tau == doctest::Approx(2.337629).epsilon(1e-4));
    CHECK(slow.tau == doctest::Approx(3.026520).epsilon(1e-4));
    CHECK(fast.tau < slow.tau);
  }

  TEST_CASE("cross-correlation terms split the two families") {
    RateMatrix plain = RateMatrix::calibrated(kSys);
    plain.delta1 = 0.0;
    plain.delta2 = 0.0;
    // without them the two-spin order decouples: strict mono-exponential
    // decay at mu12 for both families
    const std::vector<double> taus = default_tau_grid(6.0, 0.5);
    for (BellKind kind : {BellKind::triplet0, BellKind::psi_plus}) {
      const ExpFit fit = fit_initial_exponential(
          simulate_decay(kind, plain, kSys, taus), 6.0);
      CHECK(fit.tau == doctest::Approx(1.0 / plain.mu12).epsilon(1e-6));
      CHECK(fit.rms_residual < 1e-9);
    }
  }

  TEST_CASE("long acquisitions expose the multi-exponential character") {
    const RateMatrix r = RateMatrix::calibrated(kSys);
    const std::vector<double> taus = default_tau_grid(16.0, 0.5);
    const DecayCurve fast_curve =
        simulate_decay(BellKind::singlet, r, kSys, taus);
    const DecayCurve slow_curve =
        simulate_decay(BellKind::psi_plus, r, kSys, taus);
    const ExpFit fast_fit = fit_initial_exponential(fast_curve, 6.0);
    const ExpFit slow_fit = fit_initial_exponential(slow_curve, 6.0);
    const double fast_rms =
        log_rms_vs_single_exponential(fast_curve, fast_fit);
    const double slow_rms =
        log_rms_vs_single_exponential(slow_curve, slow_fit);
    // the flip-flop family inverts through zero near 13.5 s, so a single
    // exponential fails badly there while the aligned family stays clean
    CHECK(fast_rms > 0.5);
    CHECK(slow_rms < 0.1);
    CHECK(fast_rms / slow_rms > 10.0);
    // non-monotone tail for the flip-flop family only
    auto is_monotone = [](const DecayCurve& c) {
      for (std::size_t k = 1; k < c.values.size(); ++k) {
        if (c.values[k] > c.values[k - 1]) return false;
      }
      return true;
    };
    CHECK_FALSE(is_monotone(fast_curve));
    CHECK(is_monotone(slow_curve));
  }

  TEST_CASE("exponential fit recovers exact synthetic inputs") {
    DecayCurve curve;
    for (int k = 0; k <= 24; ++k) {
      const double t = 0.25 * k;
      curve.times_s.push_back(t);
      curve.values.push_back(0.93 * std::exp(-t / 2.7));
    }
    const ExpFit fit = fit_initial_exponential(curve, 6.0);
    CHECK(fit.tau == doctest::Approx(2.7).epsilon(1e-9));
    CHECK(fit.amplitude == doctest::Approx(0.93).epsilon(1e-9));
    CHECK(fit.rms_residual < 1e-12);
  }

  TEST_CASE("fit input validation") {
    DecayCurve curve;
    curve.times_s = {0.0, 1.0};
    curve.values = {1.0, 0.5};
    CHECK_THROWS_AS(fit_initial_exponential(curve, 6.0), ValidationError);
    curve.times_s = {0.0, 1.0, 2.0, 3.0};
    curve.values = {1.0, 0.5, -0.2, 0.1};
    CHECK_THROWS_AS(fit_initial_exponential(curve, 6.0), ValidationError);
    curve.values = {1.0, 0.5, 0.2};  // length mismatch
    CHECK_THROWS_AS(fit_initial_exponential(curve, 6.0), ValidationError);
    // growing input has no decay time
    curve.times_s = {0.0, 1.0, 2.0};
    curve.values = {0.1, 0.5, 1.0};
    CHECK_THROWS_AS(fit_initial_exponential(curve, 6.0), NumericalError);
  }

  TEST_CASE("decay CSV round-trips exactly") {
    const RateMatrix r = RateMatrix::calibrated(kSys);
    const DecayCurve curve = simulate_decay(
        BellKind::triplet0, r, kSys, default_tau_grid(3.0, 0.5));
    std::ostringstream os;
    write_decay_csv(os, curve);
    std::istringstream is(os.str());
    const DecayCurve back = read_decay_csv(is);
    REQUIRE(back.times_s.size() == curve.times_s.size());
    for (std::size_t k = 0; k < curve.times_s.size(); ++k) {
      CHECK(back.times_s[k] == curve.times_s[k]);
      CHECK(back.values[k] == curve.values[k]);
    }
    std::istringstream bad("tau_s,ga\n1.0\n");
    CHECK_THROWS_AS(read_decay_csv(bad), ParseError);
  }

  TEST_CASE("delay grid construction") {
    const std::vector<double> taus = default_tau_grid(16.0, 0.5);
    REQUIRE(taus.size() == 33);
    CHECK(taus.front() == 0.0);
    CHECK(taus.back() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK_THROWS_AS(default_tau_grid(10.0, 0.0), ValidationError);
    CHECK_THROWS_AS(default_tau_grid(-1.0, 0.5), ValidationError);
    CHECK_THROWS_AS(
        simulate_decay(BellKind::singlet, RateMatrix::calibrated(kSys), kSys,
                       {}),
        ValidationError);
  }
}
