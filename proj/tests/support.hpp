#ifndef MOG_TEST_SUPPORT_HPP
#define MOG_TEST_SUPPORT_HPP

#include <cmath>
#include <string>
#include <vector>

#include "mog/path_core.hpp"

namespace testing {

// {A->B->C : 2, A->B->A : 1}
inline mog::PathCollection toy() { return mog::parse_paths_string("A,B,C\t2\nA,B,A\n"); }

inline std::vector<mog::Vertex> ids(const mog::VertexIndex& index, const std::vector<std::string>& labels) {
    std::vector<mog::Vertex> out;
    for (const auto& l : labels) out.push_back(*index.find(l));
    return out;
}

inline bool close(double a, double b, double tol = 1e-12) { return std::fabs(a - b) <= tol; }

} // namespace testing

#endif
