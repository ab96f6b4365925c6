#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "perm_group.hpp"
#include "schlafli.hpp"

namespace c27 {

enum class NamedGroup {
  C2xC2,
  S3,
  S4,
  C6,
  S3xC3,
  S3xC2,
  S3xS3,
  S3xS3xS3,
  S4xC2xC2,
  S3xC2_sq,
  ASL2F3,
  PGO4p3_model,
};

inline const std::map<std::string, NamedGroup>& named_group_table() {
  static const std::map<std::string, NamedGroup> t{
      {"C2xC2", NamedGroup::C2xC2},       {"S3", NamedGroup::S3},
      {"S4", NamedGroup::S4},             {"C6", NamedGroup::C6},
      {"S3xC3", NamedGroup::S3xC3},       {"S3xC2", NamedGroup::S3xC2},
      {"S3xS3", NamedGroup::S3xS3},       {"S3xS3xS3", NamedGroup::S3xS3xS3},
      {"S4xC2xC2", NamedGroup::S4xC2xC2}, {"S3xC2_sq", NamedGroup::S3xC2_sq},
      {"ASL2F3", NamedGroup::ASL2F3},     {"PGO4p3_model", NamedGroup::PGO4p3_model},
  };
  return t;
}

inline std::string to_string(NamedGroup g) {
  for (const auto& [name, value] : named_group_table())
    if (value == g) return name;
  return "?";
}

inline NamedGroup parse_named_group(const std::string& s) {
  auto it = named_group_table().find(s);
  if (it == named_group_table().end()) throw std::invalid_argument("unknown group name: " + s);
  return it->second;
}

/// Affine map v -> A v + t on F3^2, points indexed x + 3y.
inline Permutation affine_f3(int a00, int a01, int a10, int a11, int t0, int t1) {
  std::vector<int> img(9);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      int nx = ((a00 * x + a01 * y + t0) % 3 + 3) % 3;
      int ny = ((a10 * x + a11 * y + t1) % 3 + 3) % 3;
      img[x + 3 * y] = nx + 3 * ny;
    }
  return Permutation::from_images(img);
}

/// ASL2(F3) acting on the nine points of the affine plane.
inline PermGroup asl2_f3() {
  return PermGroup(9, {affine_f3(1, 0, 0, 1, 1, 0), affine_f3(1, 0, 0, 1, 0, 1),
                       affine_f3(1, 1, 0, 1, 0, 0), affine_f3(1, 0, 1, 1, 0, 0)});
}

/// The tritangent-triple stabilizer in W(E6) modulo its center, acting on
/// cosets of the center.
inline PermGroup pgo4p3_model() {
  PermGroup go = set_stabilizer(schlafli::weyl_e6(), {0, 7, 12});
  return quotient(go, center(go)).group;
}

/// Oracle construction of a named group on a natural faithful domain.
inline PermGroup named_group(NamedGroup name) {
  const PermGroup c2 = cyclic_group(2), c3 = cyclic_group(3), s3 = symmetric_group(3);
  switch (name) {
    case NamedGroup::C2xC2: return direct_product({c2, c2});
    case NamedGroup::S3: return s3;
    case NamedGroup::S4: return symmetric_group(4);
    case NamedGroup::C6: return cyclic_group(6);
    case NamedGroup::S3xC3: return direct_product({s3, c3});
    case NamedGroup::S3xC2: return direct_product({s3, c2});
    case NamedGroup::S3xS3: return direct_product({s3, s3});
    case NamedGroup::S3xS3xS3: return direct_product({s3, s3, s3});
    case NamedGroup::S4xC2xC2: return direct_product({symmetric_group(4), c2, c2});
    case NamedGroup::S3xC2_sq: return direct_product({s3, c2, s3, c2});
    case NamedGroup::ASL2F3: return asl2_f3();
    case NamedGroup::PGO4p3_model: return pgo4p3_model();
  }
  throw std::invalid_argument("named_group: unknown name");
}

}  // namespace c27
