#pragma once

// Finite boxes in Z^d, bipartitions of them, and l1 geometry.
//
// Sites are stored in lexicographic order and every matrix in the library is
// indexed by that order. A Region keeps its inside and outside index lists in
// parent order, so block extraction always puts the region first.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "oscent/errors.hpp"

namespace oscent {

using Site = std::vector<std::int64_t>;

inline std::int64_t l1_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("l1_distance: sites have different dimensions (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::llabs(a[i] - b[i]);
  return d;
}

class Lattice {
 public:
  Lattice(std::size_t dimension, std::vector<std::int64_t> lengths) : dim_(dimension), lengths_(std::move(lengths)) {
    if (dim_ == 0) throw InvalidArgument("Lattice: dimension must be >= 1");
    if (lengths_.size() != dim_) {
      throw InvalidArgument("Lattice: expected " + std::to_string(dim_) + " side lengths, got " +
                            std::to_string(lengths_.size()));
    }
    std::size_t total = 1;
    for (auto len : lengths_) {
      if (len < 1) throw InvalidArgument("Lattice: side lengths must be >= 1");
      total *= static_cast<std::size_t>(len);
    }
    sites_.reserve(total);
    Site cur(dim_, 0);
    for (std::size_t n = 0; n < total; ++n) {
      sites_.push_back(cur);
      // odometer increment, last axis fastest => lexicographic order
      for (std::size_t ax = dim_; ax-- > 0;) {
        if (++cur[ax] < lengths_[ax]) break;
        cur[ax] = 0;
      }
    }
    for (std::size_t i = 0; i < sites_.size(); ++i) index_.emplace(sites_[i], i);

    neighbors_.resize(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      Site probe = sites_[i];
      for (std::size_t ax = 0; ax < dim_; ++ax) {
        for (int step : {-1, +1}) {
          probe[ax] += step;
          if (auto j = find(probe)) neighbors_[i].push_back(*j);
          probe[ax] -= step;
        }
      }
      std::sort(neighbors_[i].begin(), neighbors_[i].end());
    }
  }

  std::size_t dimension() const { return dim_; }
  const std::vector<std::int64_t>& lengths() const { return lengths_; }
  std::size_t size() const { return sites_.size(); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(std::size_t i) const { return sites_.at(i); }

  std::optional<std::size_t> find(const Site& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const Site& s) const {
    if (auto i = find(s)) return *i;
    throw InvalidArgument("Lattice: site is not in the box");
  }

  /// Indices of the nearest neighbours of site i that lie inside the box.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }

  std::int64_t distance(std::size_t i, std::size_t j) const { return l1_distance(sites_[i], sites_[j]); }

 private:
  std::size_t dim_;
  std::vector<std::int64_t> lengths_;
  std::vector<Site> sites_;
  std::map<Site, std::size_t> index_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

inline Lattice build_box(std::size_t d, const std::vector<std::int64_t>& lengths) { return Lattice(d, lengths); }

inline std::shared_ptr<const Lattice> make_box(std::size_t d, const std::vector<std::int64_t>& lengths) {
  return std::make_shared<const Lattice>(d, lengths);
}

/// A subregion L0 of a lattice together with its complement.
class Region {
 public:
  Region(std::shared_ptr<const Lattice> lattice, const std::vector<std::size_t>& inside_indices)
      : lattice_(std::move(lattice)) {
    if (!lattice_) throw InvalidArgument("Region: null lattice");
    mask_.assign(lattice_->size(), false);
    for (auto i : inside_indices) {
      if (i >= lattice_->size()) throw InvalidArgument("Region: site index out of range");
      if (mask_[i]) throw InvalidArgument("Region: duplicate site");
      mask_[i] = true;
    }
    for (std::size_t i = 0; i < mask_.size(); ++i) (mask_[i] ? inside_ : outside_).push_back(i);
  }

  static Region from_sites(std::shared_ptr<const Lattice> lattice, const std::vector<Site>& sites) {
    if (!lattice) throw InvalidArgument("Region: null lattice");
    std::vector<std::size_t> idx;
    idx.reserve(sites.size());
    for (const auto& s : sites) idx.push_back(lattice->index_of(s));
    return Region(std::move(lattice), idx);
  }

  /// Axis-aligned sub-box with the given lower corner and side lengths.
  static Region sub_box(std::shared_ptr<const Lattice> lattice, const Site& corner,
                        const std::vector<std::int64_t>& lengths) {
    if (!lattice) throw InvalidArgument("Region: null lattice");
    const auto d = lattice->dimension();
    if (corner.size() != d || lengths.size() != d) throw InvalidArgument("Region::sub_box: dimension mismatch");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < lattice->size(); ++i) {
      const auto& s = lattice->site(i);
      bool in = true;
      for (std::size_t ax = 0; ax < d && in; ++ax) in = s[ax] >= corner[ax] && s[ax] < corner[ax] + lengths[ax];
      if (in) idx.push_back(i);
    }
    std::int64_t expected = 1;
    for (auto len : lengths) {
      if (len < 1) throw InvalidArgument("Region::sub_box: side lengths must be >= 1");
      expected *= len;
    }
    if (static_cast<std::int64_t>(idx.size()) != expected) {
      throw InvalidArgument("Region::sub_box: sub-box does not fit inside the lattice");
    }
    return Region(std::move(lattice), idx);
  }

  const Lattice& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice>& lattice_ptr() const { return lattice_; }
  const std::vector<std::size_t>& inside() const { return inside_; }
  const std::vector<std::size_t>& outside() const { return outside_; }
  bool contains(std::size_t i) const { return mask_.at(i); }
  std::size_t size() const { return inside_.size(); }
  std::size_t complement_size() const { return outside_.size(); }

 private:
  std::shared_ptr<const Lattice> lattice_;
  std::vector<bool> mask_;
  std::vector<std::size_t> inside_;
  std::vector<std::size_t> outside_;
};

/// Sites of L0 with a nearest neighbour in L \ L0. Neighbours outside the box do not count.
inline std::vector<std::size_t> inner_boundary(const Region& r) {
  std::vector<std::size_t> out;
  const auto& lat = r.lattice();
  for (auto i : r.inside()) {
    const auto& nb = lat.neighbors(i);
    if (std::any_of(nb.begin(), nb.end(), [&](std::size_t j) { return !r.contains(j); })) out.push_back(i);
  }
  return out;
}

/// Optional check; nothing in the library requires L0 to be connected.
inline bool is_connected(const Region& r) {
  if (r.size() == 0) return true;
  const auto& lat = r.lattice();
  std::vector<bool> seen(lat.size(), false);
  std::queue<std::size_t> q;
  q.push(r.inside().front());
  seen[r.inside().front()] = true;
  std::size_t count = 0;
  while (!q.empty()) {
    auto i = q.front();
    q.pop();
    ++count;
    for (auto j : lat.neighbors(i)) {
      if (r.contains(j) && !seen[j]) {
        seen[j] = true;
        q.push(j);
      }
    }
  }
  return count == r.size();
}

}  // namespace oscent
