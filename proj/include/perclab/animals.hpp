// Lattice animals (finite connected vertex sets up to translation), used by
// the exhaustive topology suites and the isoperimetric scans. Canonical form:
// the lexicographically smallest cell sits at the origin.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "perclab/geometry.hpp"
#include "perclab/rng.hpp"

namespace perclab {

namespace detail {

inline std::vector<Vertex> canonical_animal(std::vector<Vertex> cells) {
  std::sort(cells.begin(), cells.end());
  const Vertex base = cells.front();
  for (auto& v : cells)
    for (int i = 0; i < v.d; ++i) v.x[i] -= base.x[i];
  return cells;
}

inline std::string animal_key(const std::vector<Vertex>& cells) {
  std::string key;
  key.reserve(cells.size() * static_cast<std::size_t>(cells.front().d));
  for (const auto& v : cells)
    for (int i = 0; i < v.d; ++i) key.push_back(static_cast<char>(v.x[i]));
  return key;
}

}  // namespace detail

// Every connected set of 1..max_size cells in Z^d, one representative per
// translation class, grown breadth-first with hash deduplication. Sizes here
// stay small (thousands of sets), so no attempt at Redelmeier-style counting.
inline std::vector<std::vector<Vertex>> connected_sets_up_to(int d, int max_size) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension out of range");
  if (max_size < 1) throw std::invalid_argument("need max size >= 1");
  std::vector<std::vector<Vertex>> out;
  std::unordered_set<std::string> seen;
  Vertex origin{};
  origin.d = static_cast<std::int8_t>(d);
  std::vector<std::vector<Vertex>> layer{{origin}};
  out.push_back(layer.front());
  seen.insert(detail::animal_key(layer.front()));
  for (int size = 2; size <= max_size; ++size) {
    std::vector<std::vector<Vertex>> next;
    for (const auto& cells : layer) {
      for (const auto& v : cells) {
        for (int i = 0; i < d; ++i) {
          for (int dir = -1; dir <= 1; dir += 2) {
            Vertex u = v;
            u.x[i] += dir;
            if (std::find(cells.begin(), cells.end(), u) != cells.end()) continue;
            std::vector<Vertex> grown = cells;
            grown.push_back(u);
            grown = detail::canonical_animal(std::move(grown));
            if (!seen.insert(detail::animal_key(grown)).second) continue;
            out.push_back(grown);
            next.push_back(std::move(grown));
          }
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

// A random connected set of exactly `size` cells, grown by repeatedly
// attaching a uniformly chosen boundary cell. Not uniform over animals; a
// cheap source of varied connected shapes.
inline std::vector<Vertex> random_connected_set(int d, int size, std::uint64_t seed, std::uint64_t rng_id) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension out of range");
  if (size < 1) throw std::invalid_argument("need size >= 1");
  rng::Counter draw(rng::combine(seed, rng::combine(0xA21A1ULL, rng_id)));
  Vertex origin{};
  origin.d = static_cast<std::int8_t>(d);
  std::vector<Vertex> cells{origin};
  std::unordered_set<Vertex, VertexHash> in(cells.begin(), cells.end());
  std::vector<Vertex> frontier;
  std::unordered_set<Vertex, VertexHash> in_frontier;
  const auto extend_frontier = [&](const Vertex& v) {
    for (int i = 0; i < d; ++i) {
      for (int dir = -1; dir <= 1; dir += 2) {
        Vertex u = v;
        u.x[i] += dir;
        if (in.count(u) || in_frontier.count(u)) continue;
        frontier.push_back(u);
        in_frontier.insert(u);
      }
    }
  };
  extend_frontier(origin);
  while (static_cast<int>(cells.size()) < size) {
    const std::uint64_t pick = draw.next_below(frontier.size());
    const Vertex chosen = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    in_frontier.erase(chosen);
    cells.push_back(chosen);
    in.insert(chosen);
    extend_frontier(chosen);
  }
  return detail::canonical_animal(std::move(cells));
}

}  // namespace perclab
