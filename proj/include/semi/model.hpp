#pragma once

#include <string>
#include <vector>

#include "semi/format.hpp"
#include "semi/semiatlas.hpp"
#include "semi/semibundle.hpp"

namespace semi {

/// Signature of the atlas described by a document: the bundle base, the
/// first space, or the first coordinate or transition map.
inline SuperDomainSignature atlas_signature(const Document& doc) {
  if (doc.bundle) return doc.space(doc.bundle->base);
  if (!doc.spaces.empty()) return doc.spaces.front().signature;
  for (const auto& m : doc.maps) {
    if (m.role == MapRole::Coordinate || m.role == MapRole::Transition) return m.map.target();
  }
  return {0, 0};
}

namespace detail {

inline void add_overlaps(const Document& doc, SemiAtlas& atlas, bool second) {
  for (const auto& o : doc.overlaps) {
    std::vector<std::string> part;
    for (const auto& n : o) {
      if (doc.find_chart(n)->second == second) part.push_back(n);
    }
    if (part.size() >= 2) atlas.add_overlap(part);
  }
}

}  // namespace detail

/// The charts of the first cover with their coordinate maps and transitions.
inline SemiAtlas build_atlas(const Document& doc) {
  SemiAtlas atlas(doc.n_generators, atlas_signature(doc));
  for (const auto& c : doc.charts) {
    if (!c.second) atlas.add_chart(c.name, c.semi);
  }
  detail::add_overlaps(doc, atlas, false);
  for (const auto& m : doc.maps) {
    if (m.role == MapRole::Coordinate) atlas.set_coordinate_map(m.charts[0], m.map);
    if (m.role == MapRole::Transition) atlas.set_transition(m.charts[0], m.charts[1], m.map);
  }
  return atlas;
}

inline SemiBundle build_bundle(const Document& doc) {
  if (!doc.bundle) throw Error(ErrorKind::InvalidArgument, "document declares no bundle");
  SemiBundle b(build_atlas(doc), doc.space(doc.bundle->total), doc.space(doc.bundle->fiber));
  for (const auto& m : doc.maps) {
    switch (m.role) {
      case MapRole::Projection: b.set_projection(m.map); break;
      case MapRole::Section: b.set_section(m.charts[0], m.map); break;
      case MapRole::Trivialization: b.set_trivialization(m.charts[0], m.map); break;
      case MapRole::BundleTransition:
        if (!doc.find_chart(m.charts[0])->second) b.set_transition(m.charts[0], m.charts[1], m.map);
        break;
      default: break;
    }
  }
  return b;
}

[[nodiscard]] inline bool has_second_cover(const Document& doc) {
  for (const auto& c : doc.charts) {
    if (c.second) return true;
  }
  return false;
}

/// Charts marked `second` with their bundle transitions, on base ⊕ fiber.
inline SemiAtlas build_second_cover(const Document& doc) {
  if (!doc.bundle) throw Error(ErrorKind::InvalidArgument, "document declares no bundle");
  SemiAtlas atlas(doc.n_generators, doc.space(doc.bundle->base) + doc.space(doc.bundle->fiber));
  for (const auto& c : doc.charts) {
    if (c.second) atlas.add_chart(c.name, c.semi);
  }
  detail::add_overlaps(doc, atlas, true);
  for (const auto& m : doc.maps) {
    if (m.role == MapRole::BundleTransition && doc.find_chart(m.charts[0])->second) {
      atlas.set_transition(m.charts[0], m.charts[1], m.map);
    }
  }
  return atlas;
}

inline CrossTable build_cross_table(const Document& doc) {
  CrossTable out;
  for (const auto& m : doc.maps) {
    if (m.role == MapRole::Cross) out.emplace(std::make_pair(m.charts[0], m.charts[1]), m.map);
  }
  return out;
}

}  // namespace semi
