#include "softcut/tear_box.hpp"

#include <algorithm>
#include <cmath>

namespace softcut {

namespace {

constexpr double kFrameTolerance = 1e-6;

bool has_frame(const ScalpelSample& from, const ScalpelSample& to) {
  const Vec3d motion = to.tip - from.tip;
  const double len = motion.norm();
  if (!(len > 0.0)) return false;
  const Vec3d axis = from.end - from.tip;
  const double axis_len = axis.norm();
  if (!(axis_len > 0.0)) return false;
  return motion.cross(axis).norm() > kFrameTolerance * len * axis_len;
}

// Interface between the segment arriving at `s` along m_in and the one
// leaving along m_out. Normal points forward.
Planed interface_plane(const ScalpelSample& s, const Vec3d& m_in, const Vec3d& m_out) {
  Vec3d blade = s.end - s.tip;
  const double blade_len = blade.norm();
  if (blade_len > 0.0) blade /= blade_len;
  auto reject = [&](const Vec3d& v) { return Vec3d(blade_len > 0.0 ? v - v.dot(blade) * blade : v); };
  Vec3d n = reject(m_in + m_out);
  if (n.norm() < kFrameTolerance) n = reject(m_in);
  if (n.norm() < kFrameTolerance) n = m_in;
  return Planed::through(s.tip, n);
}

}  // namespace

bool TearBox::contains_strict(const Vec3d& p, double eps) const {
  return std::all_of(planes.begin(), planes.end(), [&](const Planed& pl) { return pl.signed_distance(p) < -eps; });
}

bool TearBox::contains_closed(const Vec3d& p, double eps) const {
  return std::all_of(planes.begin(), planes.end(), [&](const Planed& pl) { return pl.signed_distance(p) <= eps; });
}

bool TearBox::segment_intersects(const Vec3d& a, const Vec3d& b, double eps) const {
  double t0 = 0.0, t1 = 1.0;
  for (const Planed& pl : planes) {
    const double da = pl.signed_distance(a) - eps;
    const double db = pl.signed_distance(b) - eps;
    if (da > 0.0 && db > 0.0) return false;
    if (da > 0.0) t0 = std::max(t0, da / (da - db));
    else if (db > 0.0) t1 = std::min(t1, da / (da - db));
    if (t0 > t1) return false;
  }
  return true;
}

double TearBox::distance_lower_bound(const Vec3d& p) const {
  double d = 0.0;
  for (const Planed& pl : planes) d = std::max(d, pl.signed_distance(p));
  return d;
}

std::vector<Vec3d> TearBox::vertices(double eps) const {
  std::vector<Vec3d> out;
  for (int i = 0; i < kBoxPlanes; ++i)
    for (int j = i + 1; j < kBoxPlanes; ++j)
      for (int k = j + 1; k < kBoxPlanes; ++k) {
        Eigen::Matrix3d m;
        m.row(0) = planes[i].normal.transpose();
        m.row(1) = planes[j].normal.transpose();
        m.row(2) = planes[k].normal.transpose();
        const Eigen::Vector3d rhs(planes[i].offset, planes[j].offset, planes[k].offset);
        Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
        if (!lu.isInvertible()) continue;
        const Vec3d x = lu.solve(rhs);
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        if (contains_closed(x, eps * scale)) out.push_back(x);
      }
  return out;
}

Aabbd TearBox::bounds() const {
  Aabbd box;
  for (const Vec3d& v : vertices()) box.extend(v);
  return box;
}

TearBox TearBox::expanded(double amount) const {
  TearBox out = *this;
  for (Planed& pl : out.planes) pl = pl.shifted(amount);
  return out;
}

std::vector<ScalpelSample> usable_samples(std::span<const ScalpelSample> samples) {
  std::vector<ScalpelSample> kept;
  for (const ScalpelSample& s : samples) {
    if (kept.empty() || has_frame(kept.back(), s)) kept.push_back(s);
  }
  return kept;
}

std::vector<TearBox> build_tear_boxes(std::span<const ScalpelSample> samples, double width) {
  const std::vector<ScalpelSample> s = usable_samples(samples);
  if (s.size() < 2) throw Error(ErrorKind::DegenerateSegment, "tear stroke needs two samples with a usable frame");
  const double half = 0.5 * std::max(width, 0.0);
  const std::size_t count = s.size() - 1;

  std::vector<Vec3d> motion(count);
  for (std::size_t k = 0; k < count; ++k) motion[k] = (s[k + 1].tip - s[k].tip).normalized();

  std::vector<TearBox> boxes(count);
  for (std::size_t k = 0; k < count; ++k) {
    TearBox& box = boxes[k];
    const Vec3d& a = s[k].tip;
    const Vec3d& b = s[k + 1].tip;
    const Vec3d& m = motion[k];
    const Vec3d blade = s[k].end - a;
    const Vec3d axis = (blade - blade.dot(m) * m).normalized();
    const Vec3d lateral = m.cross(axis).normalized();
    const double depth = blade.dot(axis);

    box.motion = m;
    box.axis = axis;
    box.lateral = lateral;
    box.width = std::max(width, 0.0);
    box.segment_span = {a, b};
    box.tear_plane = Planed{lateral, lateral.dot(a)};

    auto& p = box.planes;
    p[static_cast<int>(BoxPlane::LateralNeg)] = Planed{-lateral, -lateral.dot(a) + half};
    p[static_cast<int>(BoxPlane::LateralPos)] = Planed{lateral, lateral.dot(a) + half};
    p[static_cast<int>(BoxPlane::Entry)] =
        k > 0 ? interface_plane(s[k], motion[k - 1], m).flipped() : Planed{-m, -m.dot(a)};
    p[static_cast<int>(BoxPlane::Exit)] =
        k + 1 < count ? interface_plane(s[k + 1], m, motion[k + 1]) : Planed{m, m.dot(b)};
    p[static_cast<int>(BoxPlane::Top)] = Planed{axis, axis.dot(a) + depth};
    p[static_cast<int>(BoxPlane::Bottom)] = Planed{-axis, -axis.dot(a) + half};
  }
  return boxes;
}

}  // namespace softcut
