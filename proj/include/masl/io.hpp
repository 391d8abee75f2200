#pragma once

#include <iosfwd>

#include "masl/experiments.hpp"

namespace masl {

// Text formats. Numbers are written with enough digits to round-trip.
//
//   polygon <V>         mesh <N> <T>        solution <N>
//   x y                 x y b               x y u
//   ...                 ...
//                       i j k   (0-based, CCW)
//
// CSV: experiment,level,dofs,h,m,rel_linf_error,newton_iters,converged,
// wall_time_s with the error in scientific notation (6 significant digits),
// left empty when the run has no reference solution.

void write_polygon(std::ostream& os, const Polygon& poly);
Polygon read_polygon(std::istream& is, double sampling_h);

void write_mesh(std::ostream& os, const TriMesh& mesh);
TriMesh read_mesh(std::istream& is);

void write_solution(std::ostream& os, const TriMesh& mesh,
                    std::span<const double> u);

void write_csv(std::ostream& os, const std::vector<StudyRow>& rows);

}  // namespace masl
