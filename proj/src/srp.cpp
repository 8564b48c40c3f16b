#include "fsgcc/srp.hpp"

#include <cmath>
#include <stdexcept>

#include "fsgcc/fft.hpp"

namespace fsgcc {

namespace {

std::vector<double> axis_centers(double extent, double resolution) {
  std::vector<double> centers;
  const int count = static_cast<int>(std::floor(extent / resolution));
  for (int i = 0; i < count; ++i) centers.push_back((i + 0.5) * resolution);
  return centers;
}

}  // namespace

SrpGrid make_planar_grid(const Eigen::Vector3d& room_dims, double z, double resolution) {
  if (resolution <= 0.0) throw std::invalid_argument("resolution must be positive");
  if (z <= 0.0 || z >= room_dims[2]) throw std::invalid_argument("plane outside room");

  SrpGrid grid;
  grid.resolution = resolution;
  grid.half_extent = {resolution / 2.0, resolution / 2.0, 0.0};
  for (double x : axis_centers(room_dims[0], resolution))
    for (double y : axis_centers(room_dims[1], resolution))
      grid.points.emplace_back(x, y, z);
  if (grid.points.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

SrpGrid make_volume_grid(const Eigen::Vector3d& room_dims, double resolution) {
  if (resolution <= 0.0) throw std::invalid_argument("resolution must be positive");

  SrpGrid grid;
  grid.resolution = resolution;
  grid.half_extent = Eigen::Vector3d::Constant(resolution / 2.0);
  for (double x : axis_centers(room_dims[0], resolution))
    for (double y : axis_centers(room_dims[1], resolution))
      for (double z : axis_centers(room_dims[2], resolution))
        grid.points.emplace_back(x, y, z);
  if (grid.points.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

LagInterval pairwise_lag_interval(const MicPairGeometry& pair, const Eigen::Vector3d& point,
                                  const Eigen::Vector3d& half_extent, double fs, double c) {
  const Eigen::Vector3d di = point - pair.mic_i;
  const Eigen::Vector3d dj = point - pair.mic_j;
  const double ri = di.norm();
  const double rj = dj.norm();
  if (ri < 1e-9 || rj < 1e-9) throw std::invalid_argument("grid point on a microphone");

  const double scale = fs / c;
  const double tdoa = (ri - rj) * scale;
  const Eigen::Vector3d gradient = (di / ri - dj / rj) * scale;

  double delta = 0.0;
  for (int d = 0; d < 3; ++d) delta += std::abs(gradient[d]) * half_extent[d];

  LagInterval interval;
  interval.lo = static_cast<int>(std::floor(tdoa - delta));
  interval.hi = static_cast<int>(std::ceil(tdoa + delta));
  if (delta > 0.0) {
    --interval.lo;
    ++interval.hi;
  }
  return interval;
}

SrpMap msrp_map(const std::vector<Eigen::VectorXd>& pair_gccs,
                const std::vector<MicPairGeometry>& pairs, const SrpGrid& grid, double fs,
                double c, GccSource source) {
  if (pairs.empty() || pair_gccs.size() != pairs.size())
    throw std::invalid_argument("need one GCC per pair");
  if (grid.points.empty()) throw std::invalid_argument("empty grid");

  SrpMap map;
  map.gcc_source = source;
  map.scores.assign(grid.points.size(), 0.0);

  for (size_t g = 0; g < grid.points.size(); ++g) {
    double score = 0.0;
    for (size_t p = 0; p < pairs.size(); ++p) {
      const Eigen::VectorXd& gcc = pair_gccs[p];
      const int n = static_cast<int>(gcc.size());
      LagInterval iv =
          pairwise_lag_interval(pairs[p], grid.points[g], grid.half_extent, fs, c);
      iv.lo = std::max(iv.lo, -n / 2);
      iv.hi = std::min(iv.hi, n / 2 - 1);
      for (int lag = iv.lo; lag <= iv.hi; ++lag) score += gcc[lag_to_index(lag, n)];
    }
    map.scores[g] = score;
  }

  map.argmax_index = 0;
  for (size_t g = 1; g < map.scores.size(); ++g)
    if (map.scores[g] > map.scores[map.argmax_index]) map.argmax_index = static_cast<int>(g);
  map.argmax_point = grid.points[map.argmax_index];
  return map;
}

double localize(const SrpMap& map, const Eigen::Vector3d& true_pos) {
  return (map.argmax_point - true_pos).norm();
}

}  // namespace fsgcc
