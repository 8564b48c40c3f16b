#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fsgcc {

/// Uniform search grid of cell centers with a shared per-cell half extent
/// (zero along axes the grid does not cover).
struct SrpGrid {
  double resolution = 0.0;
  std::vector<Eigen::Vector3d> points;
  Eigen::Vector3d half_extent = Eigen::Vector3d::Zero();
};

SrpGrid make_planar_grid(const Eigen::Vector3d& room_dims, double z, double resolution);
SrpGrid make_volume_grid(const Eigen::Vector3d& room_dims, double resolution);

struct MicPairGeometry {
  Eigen::Vector3d mic_i;
  Eigen::Vector3d mic_j;
};

struct LagInterval {
  int lo = 0;
  int hi = 0;
};

/// Closed integer interval of TDOAs attained over a grid cell, from a
/// first-order bound on the TDOA field at the cell center, widened by one
/// lag on each side when the cell has extent.
LagInterval pairwise_lag_interval(const MicPairGeometry& pair, const Eigen::Vector3d& point,
                                  const Eigen::Vector3d& half_extent, double fs, double c);

enum class GccSource { gcc, fs_svd, fs_wsvd };

struct SrpMap {
  std::vector<double> scores;
  Eigen::Vector3d argmax_point = Eigen::Vector3d::Zero();
  int argmax_index = 0;
  GccSource gcc_source = GccSource::gcc;
};

/// Accumulate each pair's GCC over the per-cell lag interval. GCC vectors
/// are lag-ordered (length N, entry 0 <-> lag -N/2) and used signed.
SrpMap msrp_map(const std::vector<Eigen::VectorXd>& pair_gccs,
                const std::vector<MicPairGeometry>& pairs, const SrpGrid& grid, double fs,
                double c, GccSource source);

/// Euclidean distance between the map argmax and the true position.
double localize(const SrpMap& map, const Eigen::Vector3d& true_pos);

}  // namespace fsgcc
