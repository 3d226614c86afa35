#pragma once

#include <string>
#include <vector>

namespace crx::cmp {

// hyperspace <ID>
// slice <module-prefix> : <SliceName>
struct SliceMapping {
  std::string prefix;  // matches a module exactly or under "<prefix>."
  std::string slice;
};

struct HyperspaceSpec {
  std::string name;
  std::vector<SliceMapping> slices;
};

// hypermodule <ID>
// hyperslices: A, B;
// relationships: mergeByName;
struct HypermoduleSpec {
  std::string name;
  std::vector<std::string> hyperslices;  // composition order
  std::string relationship;              // only "mergeByName" is defined
};

inline bool equal(const HypermoduleSpec& a, const HypermoduleSpec& b) {
  return a.name == b.name && a.hyperslices == b.hyperslices && a.relationship == b.relationship;
}

}  // namespace crx::cmp
