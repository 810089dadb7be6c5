#pragma once

#include "nwa/nwa.hpp"

#include <string>
#include <vector>

namespace nwa {

/// Built-in NWAs: art, aw, ae, ae_bounded(L,U), dcp, mr, ex15, ex6.
Nwa corpus_build(const std::string& name);

/// Names accepted by corpus_build; ae_bounded is listed as ae_bounded(0,3).
std::vector<std::string> corpus_names();

}  // namespace nwa
