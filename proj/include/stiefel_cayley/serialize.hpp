#pragma once

// JSON forms of matrices, frames, lifts, optimizer traces and cover reports.
//
// Matrix: {"field": "real|complex|quaternion", "rows": r, "cols": c,
//          "data": [[components], ...]}
// with one entry per matrix element in row-major order, each entry holding
// 1, 2 or 4 real components.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "stiefel_cayley/cover.hpp"
#include "stiefel_cayley/optim.hpp"
#include "stiefel_cayley/stiefel.hpp"

namespace stiefel_cayley {

using json = nlohmann::ordered_json;

json to_json(const Mat& m);
/// Throws InvalidArgument on malformed input (bad field, shape, component
/// count, non-finite value).
Mat matrix_from_json(const json& j);

/// Matrix schema plus "n" and "k".
json to_json(const StiefelPoint& x);
StiefelPoint stiefel_point_from_json(const json& j);

/// {"n", "k", "A": matrix}; the point is recovered as rho(A).
json to_json(const Lift& lift);
Lift lift_from_json(const json& j);

json to_json(const IterationRecord& r);
/// One compact JSON object per line, then {"reason": ...}.
void write_trace_jsonl(std::ostream& os, const OptimTrace& trace);
/// iter,f,gnorm,step,backtracks header plus one row per record.
void write_trace_csv(std::ostream& os, const OptimTrace& trace);

json to_json(const CoverReport& report);

}  // namespace stiefel_cayley
