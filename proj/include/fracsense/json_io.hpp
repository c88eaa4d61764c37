#pragma once

#include <json.hpp>

#include <string_view>

#include "fracsense/lp.hpp"
#include "fracsense/nit.hpp"

namespace fracsense {

std::string_view to_string(Termination t);
std::string_view to_string(LpStatus s);

/// {"solution": [...], "trace": [{k, objective, step_delta, lambda_k, residual}, ...],
///  "termination": "Converged"|"MaxIter", "iterations", "mu", "fixed_point_residual"}
nlohmann::json to_json(const SolveReport<double>& report);

/// {"x": [...], "objective", "status": "Optimal"|"Infeasible"|"Unbounded", "basis": [...], "pivots"}
nlohmann::json to_json(const LpSolution& solution);

nlohmann::json vector_to_json(const Vector& v);

}  // namespace fracsense
