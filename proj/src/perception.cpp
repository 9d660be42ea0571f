// Copyright 2026 The mmic Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmic/perception.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <unordered_map>

namespace mmic {

Pose RigidTransform::apply(const Pose& pose) const {
  return Pose(apply(pose.p), Quat(R) * pose.r);
}

RigidTransform RigidTransform::inverse() const {
  return {R.transpose(), -(R.transpose() * t)};
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  return {R * rhs.R, R * rhs.t + t};
}

Vec3 ScanFrame::to_scan(const Vec3& p_base) const {
  return base_from_scan.R.transpose() * (p_base - base_from_scan.t);
}

ScanFrame scan_frame_from_skeleton(const Skeleton& sk, const Pose& capture,
                                   double alpha_artery) {
  const Vec3 axis = sk.head_joint - sk.neck_joint;
  if (!axis.allFinite() || axis.norm() < 1e-9) {
    throw ContractViolation("skeleton: head joint coincides with neck joint");
  }
  const Vec3 x = axis.normalized();
  const Mat3 Rc = capture.rotation();
  // Keep the capture frame, re-aligned so that its x-axis follows the neck.
  Vec3 z = Rc.col(2) - Rc.col(2).dot(x) * x;
  Vec3 y;
  if (z.norm() > 1e-6) {
    z.normalize();
    y = z.cross(x);
  } else {
    y = (Rc.col(1) - Rc.col(1).dot(x) * x).normalized();
    z = x.cross(y);
  }
  Mat3 R0;
  R0.col(0) = x;
  R0.col(1) = y;
  R0.col(2) = z;
  ScanFrame f;
  f.alpha_artery = alpha_artery;
  f.base_from_scan.R =
      R0 * Eigen::AngleAxisd(sk.alpha_head - alpha_artery, Vec3::UnitX()).toRotationMatrix();
  f.base_from_scan.t = sk.neck_joint;
  return f;
}

PointCloud synth_neck_cloud(const CylinderGeometry& g, double noise_sd, std::size_t count,
                            std::uint64_t seed) {
  if (count == 0) throw ContractViolation("synth_neck_cloud: count must be positive");
  if (!(g.radius > 0.0) || !(g.length > 0.0)) {
    throw ContractViolation("synth_neck_cloud: radius and length must be positive");
  }
  if (!(noise_sd >= 0.0)) throw ContractViolation("synth_neck_cloud: noise_sd must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> along(0.0, g.length);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);
  PointCloud cloud;
  cloud.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = along(rng);
    const double th = angle(rng);
    const double n = noise(rng);
    const double r = g.radius + noise_sd * n;
    cloud.points.push_back(g.pose.apply(Vec3(x, r * std::cos(th), r * std::sin(th))));
  }
  return cloud;
}

PointCloud segment_cylinder(const PointCloud& cloud, const ScanFrame& frame, double r_cyl,
                            double x_top, double x_bottom) {
  PointCloud out;
  for (const Vec3& p : cloud.points) {
    const Vec3 s = frame.to_scan(p);
    if (std::hypot(s.y(), s.z()) <= r_cyl && s.x() >= x_bottom && s.x() <= x_top) {
      out.points.push_back(p);
    }
  }
  if (out.points.empty()) throw PerceptionError("segmentation is empty: no neck in view");
  return out;
}

namespace {

// Uniform grid for fixed-radius neighbour queries.
class NeighborGrid {
 public:
  NeighborGrid(const std::vector<Vec3>& pts, double cell) : pts_(pts), cell_(cell) {
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(cell_of(pts[i]))].push_back(i);
  }

  void query(const Vec3& q, double radius, std::vector<std::size_t>& out) const {
    out.clear();
    const Eigen::Vector3i c = cell_of(q);
    const int reach = static_cast<int>(std::ceil(radius / cell_));
    const double r2 = radius * radius;
    for (int dx = -reach; dx <= reach; ++dx) {
      for (int dy = -reach; dy <= reach; ++dy) {
        for (int dz = -reach; dz <= reach; ++dz) {
          auto it = cells_.find(key(c + Eigen::Vector3i(dx, dy, dz)));
          if (it == cells_.end()) continue;
          for (std::size_t idx : it->second) {
            if ((pts_[idx] - q).squaredNorm() <= r2) out.push_back(idx);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
  }

 private:
  Eigen::Vector3i cell_of(const Vec3& p) const {
    return {static_cast<int>(std::floor(p.x() / cell_)), static_cast<int>(std::floor(p.y() / cell_)),
            static_cast<int>(std::floor(p.z() / cell_))};
  }
  static std::uint64_t key(const Eigen::Vector3i& c) {
    auto part = [](int v) { return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1FFFFF; };
    return (part(c.x()) << 42) | (part(c.y()) << 21) | part(c.z());
  }

  const std::vector<Vec3>& pts_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

struct SurfaceSample {
  Vec3 point;
  Vec3 normal;  // unoriented
};

int basis_size(int degree) { return (degree + 1) * (degree + 2) / 2; }

void basis(double u, double v, int degree, Eigen::Ref<VecX> out) {
  int k = 0;
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) out[k++] = std::pow(u, i) * std::pow(v, d - i);
  }
}

// d(basis)/du and d(basis)/dv.
void basis_grad(double u, double v, int degree, Eigen::Ref<VecX> du, Eigen::Ref<VecX> dv) {
  int k = 0;
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) {
      const int j = d - i;
      du[k] = i > 0 ? i * std::pow(u, i - 1) * std::pow(v, j) : 0.0;
      dv[k] = j > 0 ? j * std::pow(u, i) * std::pow(v, j - 1) : 0.0;
      ++k;
    }
  }
}

// Local weighted fit around `query`; nullopt when the neighbourhood is too
// small or degenerate.
std::optional<SurfaceSample> fit_surface(const std::vector<Vec3>& pts,
                                         const std::vector<std::size_t>& nbr, const Vec3& query,
                                         double support, int degree) {
  if (nbr.size() < static_cast<std::size_t>(kMlsMinNeighbors)) return std::nullopt;
  const double h = 0.5 * support;
  VecX w(static_cast<Eigen::Index>(nbr.size()));
  Vec3 centroid = Vec3::Zero();
  double wsum = 0.0;
  for (std::size_t k = 0; k < nbr.size(); ++k) {
    const double d2 = (pts[nbr[k]] - query).squaredNorm();
    w[static_cast<Eigen::Index>(k)] = std::exp(-d2 / (h * h));
    centroid += w[static_cast<Eigen::Index>(k)] * pts[nbr[k]];
    wsum += w[static_cast<Eigen::Index>(k)];
  }
  centroid /= wsum;
  Mat3 cov = Mat3::Zero();
  for (std::size_t k = 0; k < nbr.size(); ++k) {
    const Vec3 d = pts[nbr[k]] - centroid;
    cov += w[static_cast<Eigen::Index>(k)] * d * d.transpose();
  }
  cov /= wsum;
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 ev = eig.eigenvalues();
  // Collinear or coincident neighbourhood: no plane to fit.
  if (ev[1] <= 1e-12 * std::max(ev[2], 1e-300) || ev[2] <= 0.0) return std::nullopt;
  const Vec3 n = eig.eigenvectors().col(0);
  const Vec3 eu = eig.eigenvectors().col(2);
  const Vec3 ev_axis = n.cross(eu);

  const int m = basis_size(degree);
  MatX A(static_cast<Eigen::Index>(nbr.size()), m);
  VecX b(static_cast<Eigen::Index>(nbr.size()));
  for (std::size_t k = 0; k < nbr.size(); ++k) {
    const Vec3 d = pts[nbr[k]] - centroid;
    const auto row = static_cast<Eigen::Index>(k);
    const double sw = std::sqrt(w[row]);
    VecX phi(m);
    basis(d.dot(eu) / support, d.dot(ev_axis) / support, degree, phi);
    A.row(row) = sw * phi.transpose();
    b[row] = sw * d.dot(n);
  }
  Eigen::ColPivHouseholderQR<MatX> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < m) return std::nullopt;
  const VecX c = qr.solve(b);

  const Vec3 dq = query - centroid;
  const double uq = dq.dot(eu) / support;
  const double vq = dq.dot(ev_axis) / support;
  VecX phi(m), du(m), dv(m);
  basis(uq, vq, degree, phi);
  basis_grad(uq, vq, degree, du, dv);
  const double height = phi.dot(c);
  const double gu = du.dot(c) / support;
  const double gv = dv.dot(c) / support;
  SurfaceSample s;
  s.point = centroid + uq * support * eu + vq * support * ev_axis + height * n;
  s.normal = (n - gu * eu - gv * ev_axis).normalized();
  return s;
}

}  // namespace

MlsResult mls_smooth(const PointCloud& cloud, double support_radius, int poly_degree) {
  if (!(support_radius > 0.0)) throw ContractViolation("mls_smooth: support radius must be positive");
  if (poly_degree < 0 || poly_degree > 3) throw ContractViolation("mls_smooth: degree must be in [0, 3]");
  MlsResult out;
  const NeighborGrid grid(cloud.points, support_radius);
  std::vector<std::size_t> nbr;
  for (const Vec3& p : cloud.points) {
    grid.query(p, support_radius, nbr);
    const auto s = fit_surface(cloud.points, nbr, p, support_radius, poly_degree);
    if (!s) {
      ++out.dropped;
      continue;
    }
    out.cloud.points.push_back(s->point);
  }
  return out;
}

ScanTrajectory generate_trajectory(const PointCloud& cloud, const ScanFrame& frame, int N_pts,
                                   double skin_offset, const TrajectoryOptions& opt) {
  if (N_pts < 2) throw ContractViolation("generate_trajectory: N_pts must be at least 2");
  struct Sample {
    double x, y;
  };
  std::vector<Sample> slab;
  for (const Vec3& p : cloud.points) {
    const Vec3 s = frame.to_scan(p);
    if (std::abs(s.z()) < opt.slab_half && s.y() > 0.0 && s.x() >= opt.x_min &&
        s.x() <= opt.x_max) {
      slab.push_back({s.x(), s.y()});
    }
  }
  if (slab.size() < 10) {
    throw PerceptionError("generate_trajectory: fewer than 10 surface points in the scan plane");
  }
  std::sort(slab.begin(), slab.end(), [](const Sample& a, const Sample& b) { return a.x < b.x; });

  // Average within bins along x; the outermost vertices sit on the extreme x.
  std::vector<Eigen::Vector2d> poly;
  const double x0 = slab.front().x;
  std::size_t i = 0;
  while (i < slab.size()) {
    const auto bin = static_cast<long>(std::floor((slab[i].x - x0) / opt.bin_width));
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    std::size_t count = 0;
    while (i < slab.size() &&
           static_cast<long>(std::floor((slab[i].x - x0) / opt.bin_width)) == bin) {
      acc += Eigen::Vector2d(slab[i].x, slab[i].y);
      ++count;
      ++i;
    }
    poly.push_back(acc / static_cast<double>(count));
  }
  poly.front().x() = slab.front().x;
  poly.back().x() = slab.back().x;
  if (poly.size() < 2) throw PerceptionError("generate_trajectory: degenerate intersection curve");

  std::vector<double> arc(poly.size(), 0.0);
  for (std::size_t k = 1; k < poly.size(); ++k) arc[k] = arc[k - 1] + (poly[k] - poly[k - 1]).norm();
  const double total = arc.back();

  std::vector<Vec3> curve;
  curve.reserve(static_cast<std::size_t>(N_pts));
  std::size_t seg = 0;
  for (int k = 0; k < N_pts; ++k) {
    const double s = total * k / (N_pts - 1);
    while (seg + 2 < poly.size() && arc[seg + 1] < s) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double u = len > 0.0 ? std::clamp((s - arc[seg]) / len, 0.0, 1.0) : 0.0;
    const Eigen::Vector2d xy = poly[seg] + u * (poly[seg + 1] - poly[seg]);
    curve.push_back(frame.base_from_scan.apply(Vec3(xy.x(), xy.y(), 0.0)));
  }

  // Surface normals from a local fit, oriented towards the neck axis.
  const NeighborGrid grid(cloud.points, opt.surface_radius);
  std::vector<std::size_t> nbr;
  std::vector<Vec3> inward(curve.size());
  std::vector<Vec3> surface(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const Vec3 sc = frame.to_scan(curve[k]);
    const Vec3 axis_point = frame.base_from_scan.apply(Vec3(sc.x(), 0.0, 0.0));
    grid.query(curve[k], opt.surface_radius, nbr);
    const auto fit = fit_surface(cloud.points, nbr, curve[k], opt.surface_radius, 2);
    Vec3 n;
    if (fit) {
      n = fit->normal;
      surface[k] = fit->point;
    } else {
      n = (axis_point - curve[k]).normalized();
      surface[k] = curve[k];
    }
    if (n.dot(axis_point - surface[k]) < 0.0) n = -n;
    inward[k] = n;
  }

  ScanTrajectory traj;
  traj.skin_offset = skin_offset;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = k + 1 == curve.size() ? k : k + 1;
    const Vec3& z = inward[k];
    Vec3 x = surface[b] - surface[a];
    x -= x.dot(z) * z;
    if (x.norm() < 1e-12) x = frame.base_from_scan.R.col(0) - frame.base_from_scan.R.col(0).dot(z) * z;
    x.normalize();
    Mat3 R;
    R.col(0) = x;
    R.col(1) = z.cross(x);
    R.col(2) = z;
    traj.poses.emplace_back(surface[k] + skin_offset * z, Quat(R));
  }
  return traj;
}

ScanTrajectory transform_trajectory(const ScanTrajectory& traj, const RigidTransform& T) {
  ScanTrajectory out;
  out.skin_offset = traj.skin_offset;
  out.poses.reserve(traj.poses.size());
  for (const Pose& p : traj.poses) out.poses.push_back(T.apply(p));
  return out;
}

void write_xyz(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  for (const Vec3& p : cloud.points) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
}

PointCloud read_xyz(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  PointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x >> y >> z) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 'x y z'");
    }
    cloud.points.emplace_back(x, y, z);
  }
  return cloud;
}

void write_trajectory_csv(const ScanTrajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t_index,px,py,pz,qw,qx,qy,qz\n" << std::setprecision(17);
  for (std::size_t i = 0; i < traj.poses.size(); ++i) {
    const Pose& p = traj.poses[i];
    out << i + 1 << ',' << p.p.x() << ',' << p.p.y() << ',' << p.p.z() << ',' << p.r.w() << ','
        << p.r.x() << ',' << p.r.y() << ',' << p.r.z() << '\n';
  }
}

}  // namespace mmic
