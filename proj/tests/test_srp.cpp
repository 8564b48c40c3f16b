#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsgcc/fft.hpp"
#include "fsgcc/pipeline.hpp"
#include "fsgcc/roomsim.hpp"
#include "fsgcc/rng.hpp"
#include "fsgcc/srp.hpp"

using namespace fsgcc;

namespace {

constexpr double kFs = 16000.0;
constexpr double kC = 343.0;

std::vector<Eigen::Vector3d> wall_mics() {
  return {{0.2, 3.5, 1.25}, {5.8, 3.5, 1.25}, {3.0, 0.2, 1.25},
          {3.0, 6.8, 1.25}, {0.2, 0.2, 1.25}, {5.8, 6.8, 1.25}};
}

double cell_tdoa(const MicPairGeometry& pair, const Eigen::Vector3d& p) {
  return ((p - pair.mic_i).norm() - (p - pair.mic_j).norm()) / kC * kFs;
}

}  // namespace

TEST_CASE("grid construction") {
  const Eigen::Vector3d room{6.0, 7.0, 3.0};

  SUBCASE("planar grid covers the room at fixed z") {
    const SrpGrid grid = make_planar_grid(room, 1.25, 0.15);
    CHECK(grid.points.size() == 40u * 46u);
    for (const auto& p : grid.points) {
      CHECK(p[2] == 1.25);
      CHECK(p[0] > 0.0);
      CHECK(p[0] < room[0]);
      CHECK(p[1] > 0.0);
      CHECK(p[1] < room[1]);
    }
    CHECK(grid.half_extent[0] == 0.075);
    CHECK(grid.half_extent[2] == 0.0);
    // spacing equals the resolution along covered axes
    CHECK(std::abs(grid.points[1][1] - grid.points[0][1]) == doctest::Approx(0.15));
  }

  SUBCASE("volume grid") {
    const SrpGrid grid = make_volume_grid({1.0, 1.0, 1.0}, 0.5);
    CHECK(grid.points.size() == 8);
    CHECK(grid.half_extent[2] == 0.25);
  }
}

TEST_CASE("pairwise_lag_interval") {
  const MicPairGeometry pair{{2.75, 3.5, 1.25}, {3.25, 3.5, 1.25}};

  SUBCASE("zero extent on an exact-integer TDOA point collapses") {
    const Eigen::Vector3d equidistant{3.0, 5.0, 1.25};  // TDOA exactly 0
    const LagInterval iv =
        pairwise_lag_interval(pair, equidistant, Eigen::Vector3d::Zero(), kFs, kC);
    CHECK(iv.lo == 0);
    CHECK(iv.hi == 0);
  }

  SUBCASE("broadside cell interval matches a Monte-Carlo min/max within one lag") {
    const Eigen::Vector3d center{3.0, 5.5, 1.25};  // ~2 m broadside
    const Eigen::Vector3d half{0.075, 0.075, 0.0};
    const LagInterval iv = pairwise_lag_interval(pair, center, half, kFs, kC);

    Rng rng(13);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 1000; ++i) {
      Eigen::Vector3d p = center;
      for (int d = 0; d < 3; ++d) p[d] += rng.uniform(-half[d], half[d]);
      const double t = cell_tdoa(pair, p);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    CHECK(iv.lo <= std::floor(lo) + 1);
    CHECK(iv.lo >= std::floor(lo) - 2);
    CHECK(iv.hi >= std::ceil(hi) - 1);
    CHECK(iv.hi <= std::ceil(hi) + 2);
  }

  SUBCASE("contains the rounded TDOA of every point in the cell") {
    Rng rng(29);
    const Eigen::Vector3d half{0.075, 0.075, 0.0};
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::Vector3d center{rng.uniform(0.3, 5.7), rng.uniform(0.3, 6.7), 1.25};
      const LagInterval iv = pairwise_lag_interval(pair, center, half, kFs, kC);
      for (int i = 0; i < 1000; ++i) {
        Eigen::Vector3d p = center;
        for (int d = 0; d < 3; ++d) p[d] += rng.uniform(-half[d], half[d]);
        const int rounded = static_cast<int>(round_half_even(cell_tdoa(pair, p)));
        CHECK(rounded >= iv.lo);
        CHECK(rounded <= iv.hi);
      }
    }
  }

  SUBCASE("interval width shrinks from boresight to endfire at fixed range") {
    // gradient magnitude ~ fs*d*cos(bearing)/(c*r): widest on the look axis
    const Eigen::Vector3d half{0.075, 0.075, 0.0};
    const LagInterval boresight =
        pairwise_lag_interval(pair, {3.0, 5.5, 1.25}, half, kFs, kC);
    const LagInterval endfire =
        pairwise_lag_interval(pair, {5.0, 3.5, 1.25}, half, kFs, kC);
    CHECK(boresight.hi - boresight.lo > endfire.hi - endfire.lo);
  }
}

TEST_CASE("msrp_map") {
  const Eigen::Vector3d room{6.0, 7.0, 3.0};
  const int n = 1024;

  SUBCASE("single pair: the argmax cell lies on the true-TDOA ridge") {
    const MicPairGeometry pair{{2.75, 3.5, 1.25}, {3.25, 3.5, 1.25}};
    const SrpGrid grid = make_planar_grid(room, 1.25, 0.15);
    const Eigen::Vector3d source = grid.points[817];
    const double tau = cell_tdoa(pair, source);

    Eigen::VectorXd gcc = Eigen::VectorXd::Zero(n);
    gcc[lag_to_index(static_cast<int>(round_half_even(tau)), n)] = 1.0;
    const SrpMap map = msrp_map({gcc}, {pair}, grid, kFs, kC, GccSource::gcc);

    const LagInterval at_argmax = pairwise_lag_interval(pair, map.argmax_point,
                                                        grid.half_extent, kFs, kC);
    const int rounded = static_cast<int>(round_half_even(tau));
    CHECK(at_argmax.lo <= rounded);
    CHECK(at_argmax.hi >= rounded);
  }

  SUBCASE("six mics localize a noiseless anechoic source within a cell") {
    SimScene scene;
    scene.room_dims = room;
    scene.mic_positions = wall_mics();
    scene.fs = kFs;
    scene.signal.kind = TestSignalSpec::Kind::white;
    scene.signal.duration_s = 0.4;

    Rng rng(91);
    for (int rep = 0; rep < 3; ++rep) {
      scene.source_pos = {rng.uniform(0.5, 5.5), rng.uniform(0.5, 6.5), 1.25};
      scene.signal.seed = 300 + rep;
      const auto chans = synthesize_array(scene);

      AnalysisConfig config;
      config.N = 1024;
      config.hop = 512;
      config.B = 64;
      config.M = 16;
      const auto active = active_frames(chans[0], config.N, config.hop);
      REQUIRE(!active.empty());
      const int frame = active[active.size() / 2];

      std::vector<Eigen::VectorXd> gccs;
      std::vector<MicPairGeometry> pairs;
      for (size_t i = 0; i < chans.size(); ++i) {
        const auto fi = frame_signal(chans[i], config.N, config.hop, config.taper);
        for (size_t j = i + 1; j < chans.size(); ++j) {
          const auto fj = frame_signal(chans[j], config.N, config.hop, config.taper);
          const FramePair fp = make_frame_pair(fi[frame], fj[frame], scene.fs, frame);
          const PhatSpectrum psi = phat_cross_spectrum(fp);
          gccs.push_back(conventional_gcc(psi).values);
          pairs.push_back({scene.mic_positions[i], scene.mic_positions[j]});
        }
      }
      const SrpGrid grid = make_planar_grid(room, 1.25, 0.15);
      const SrpMap map = msrp_map(gccs, pairs, grid, scene.fs, scene.c, GccSource::gcc);
      const double err = localize(map, scene.source_pos);
      CHECK(err <= 0.15 * std::numbers::sqrt2 / 2.0 + 1e-12);
    }
  }

  SUBCASE("adding a pair perturbs scores by exactly its own interval sums") {
    Rng rng(17);
    const SrpGrid grid = make_planar_grid(room, 1.25, 0.5);
    const MicPairGeometry pa{{1.0, 1.0, 1.25}, {2.0, 1.0, 1.25}};
    const MicPairGeometry pb{{4.0, 6.0, 1.25}, {4.0, 5.0, 1.25}};
    Eigen::VectorXd ga(n), gb(n);
    for (int i = 0; i < n; ++i) {
      ga[i] = rng.gaussian();
      gb[i] = rng.gaussian();
    }
    const SrpMap base = msrp_map({ga}, {pa}, grid, kFs, kC, GccSource::gcc);
    const SrpMap both = msrp_map({ga, gb}, {pa, pb}, grid, kFs, kC, GccSource::gcc);

    double max_abs_sum = 0.0;
    for (size_t g = 0; g < grid.points.size(); ++g) {
      LagInterval iv = pairwise_lag_interval(pb, grid.points[g], grid.half_extent, kFs, kC);
      iv.lo = std::max(iv.lo, -n / 2);
      iv.hi = std::min(iv.hi, n / 2 - 1);
      double sum = 0.0;
      for (int lag = iv.lo; lag <= iv.hi; ++lag) sum += gb[lag_to_index(lag, n)];
      CHECK(both.scores[g] - base.scores[g] == doctest::Approx(sum).epsilon(1e-12));
      max_abs_sum = std::max(max_abs_sum, std::abs(sum));
    }
    for (size_t g = 0; g < grid.points.size(); ++g)
      CHECK(std::abs(both.scores[g] - base.scores[g]) <= max_abs_sum + 1e-12);
  }

  SUBCASE("empty grid and mismatched inputs are rejected") {
    SrpGrid empty;
    const MicPairGeometry pair{{1.0, 1.0, 1.0}, {2.0, 1.0, 1.0}};
    CHECK_THROWS_AS(msrp_map({Eigen::VectorXd::Ones(16)}, {pair}, empty, kFs, kC,
                             GccSource::gcc),
                    std::invalid_argument);
    const SrpGrid grid = make_planar_grid(room, 1.25, 1.0);
    CHECK_THROWS_AS(msrp_map({}, {}, grid, kFs, kC, GccSource::gcc),
                    std::invalid_argument);
  }
}

TEST_CASE("localize") {
  const SrpGrid grid = make_planar_grid({6.0, 7.0, 3.0}, 1.25, 0.15);
  SrpMap map;
  map.argmax_point = grid.points[100];

  CHECK(localize(map, grid.points[100]) == 0.0);

  // one-cell offset along y
  CHECK(localize(map, grid.points[101]) == doctest::Approx(0.15));
}
