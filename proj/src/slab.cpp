#include "perclab/slab.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace perclab {

namespace {

void check_slab(const SlabSpec& s) {
  if (s.d < 2 || s.d > kMaxDim) throw std::invalid_argument("slab dimension out of range");
  if (s.w < 1 || s.h < 1) throw std::invalid_argument("slab extent must be positive");
}

int height_of(const Vertex& v) { return static_cast<int>(coord_sum(v)); }

}  // namespace

int SlabSpec::required_box_radius() const {
  check_slab(*this);
  // x_d = s - (x_1 + ... + x_{d-1}) ranges over [-(d-1)w, h + (d-1)(w-1)].
  const int lo = (d - 1) * w;          // need -lo >= -n+1
  const int hi = h + (d - 1) * (w - 1);  // need hi <= n
  return std::max({w, lo + 1, hi});
}

std::uint64_t SlabSpec::vertex_count() const {
  check_slab(*this);
  std::uint64_t lateral = 1;
  for (int i = 0; i + 1 < d; ++i) lateral *= static_cast<std::uint64_t>(2 * w);
  return lateral * static_cast<std::uint64_t>(h + 1);
}

bool SlabSpec::contains(const Vertex& v) const {
  if (v.d != d) return false;
  for (int i = 0; i + 1 < d; ++i)
    if (v.x[i] < -w + 1 || v.x[i] > w) return false;
  const int s = height_of(v);
  return 0 <= s && s <= h;
}

std::uint64_t SlabSpec::index(const Vertex& v) const {
  std::uint64_t idx = static_cast<std::uint64_t>(height_of(v));
  for (int i = 0; i + 1 < d; ++i)
    idx = idx * static_cast<std::uint64_t>(2 * w) + static_cast<std::uint64_t>(v.x[i] + w - 1);
  return idx;
}

Vertex SlabSpec::vertex_at(std::uint64_t idx) const {
  Coords x{};
  for (int i = d - 2; i >= 0; --i) {
    x[i] = static_cast<std::int32_t>(idx % static_cast<std::uint64_t>(2 * w)) - w + 1;
    idx /= static_cast<std::uint64_t>(2 * w);
  }
  const int s = static_cast<int>(idx);
  std::int64_t lateral_sum = 0;
  for (int i = 0; i + 1 < d; ++i) lateral_sum += x[i];
  x[d - 1] = static_cast<std::int32_t>(s - lateral_sum);
  return Vertex{x, static_cast<std::int8_t>(d)};
}

std::vector<std::uint8_t> climb_reachable_mask(const Configuration& c, const SlabSpec& slab) {
  check_slab(slab);
  const int d = slab.d;
  if (c.params().d != d) throw std::invalid_argument("configuration dimension does not match slab");
  if (c.params().S != 0) throw std::invalid_argument("slab construction requires the nearest-neighbour model");
  if (c.box().n < slab.required_box_radius()) throw std::invalid_argument("box too small for slab");

  std::vector<std::uint8_t> reach(slab.vertex_count(), 0);
  std::deque<std::uint64_t> queue;
  // Seed with the base layer {s = 0}: indices [0, (2w)^(d-1)).
  const std::uint64_t base_count = slab.vertex_count() / static_cast<std::uint64_t>(slab.h + 1);
  for (std::uint64_t i = 0; i < base_count; ++i) {
    reach[i] = 1;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    const Vertex v = slab.vertex_at(queue.front());
    queue.pop_front();
    for (int j = 0; j < d; ++j) {
      for (int dir : {+1, -1}) {
        Vertex u = v;
        u.x[j] += dir;  // changes s(u) by exactly dir
        if (!slab.contains(u)) continue;
        const std::uint64_t ui = slab.index(u);
        if (reach[ui]) continue;
        // Steps with s(u) > s(v) ascend and need the edge open.
        if (dir > 0 && !c.open_between(v, u)) continue;
        reach[ui] = 1;
        queue.push_back(ui);
      }
    }
  }
  return reach;
}

VertexSet climb_reachable(const Configuration& c, const SlabSpec& slab) {
  const auto mask = climb_reachable_mask(c, slab);
  std::vector<Vertex> out;
  for (std::uint64_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(slab.vertex_at(i));
  return VertexSet::of(std::move(out));
}

InterfaceResult ascending_interface(const Configuration& c, const SlabSpec& slab, const std::vector<std::uint8_t>& reach) {
  check_slab(slab);
  if (reach.size() != slab.vertex_count()) throw std::invalid_argument("reach mask does not match slab");
  InterfaceResult out;
  const int d = slab.d;
  const std::uint64_t top_start = slab.vertex_count() - slab.vertex_count() / static_cast<std::uint64_t>(slab.h + 1);
  std::vector<FacetKey> keys;
  for (std::uint64_t i = 0; i < reach.size(); ++i) {
    if (!reach[i]) continue;
    ++out.reach_size;
    if (i >= top_start) out.censored_top = true;
    const Vertex v = slab.vertex_at(i);
    for (int j = 0; j < d; ++j) {
      Vertex u = v;
      u.x[j] += 1;
      if (!slab.contains(u)) continue;
      if (reach[slab.index(u)]) continue;
      // u is beyond the reachable set across an ascending edge; the edge must
      // be closed, so its dual plaquette is open.
      if (c.open_between(v, u)) throw std::logic_error("ascending edge out of the reachable set is open");
      keys.push_back(edge_dual_plaquette(edge_between(v, u)));
    }
  }
  out.plaquettes = PlaquetteSet::of(std::move(keys));
  return out;
}

ZeroSumPoint project_zero_sum(const Coords& point2, int d) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("dimension out of range");
  ZeroSumPoint out;
  out.d = static_cast<std::int8_t>(d);
  out.den = 2 * d;
  std::int64_t sum = 0;
  for (int i = 0; i < d; ++i) sum += point2[i];
  for (int i = 0; i < d; ++i) out.num[i] = static_cast<std::int64_t>(d) * point2[i] - sum;
  return out;
}

bool slab_interior_facet(const SlabSpec& slab, const FacetKey& f) {
  check_slab(slab);
  if (f.d != slab.d) throw std::invalid_argument("facet dimension does not match slab");
  const Coords c2 = facet_center2(f);
  for (int i = 0; i + 1 < slab.d; ++i)
    if (c2[i] < -2 * slab.w + 3 || c2[i] > 2 * slab.w - 1) return false;
  const std::int64_t s2 = facet_coord_sum2(f);
  return 1 <= s2 && s2 <= 2 * slab.h - 1;
}

}  // namespace perclab
