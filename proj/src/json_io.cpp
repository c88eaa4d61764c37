#include "fracsense/json_io.hpp"

namespace fracsense {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIter: return "MaxIter";
  }
  return "?";
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

nlohmann::json vector_to_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

nlohmann::json to_json(const SolveReport<double>& report) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& rec : report.trace) {
    trace.push_back({{"k", rec.k},
                     {"objective", rec.objective},
                     {"step_delta", rec.step_delta},
                     {"lambda_k", rec.lambda_k},
                     {"residual", rec.residual}});
  }
  return {{"solution", vector_to_json(report.solution)},
          {"trace", std::move(trace)},
          {"termination", to_string(report.termination)},
          {"iterations", report.iterations},
          {"mu", report.mu},
          {"fixed_point_residual", report.fixed_point_residual}};
}

nlohmann::json to_json(const LpSolution& solution) {
  return {{"x", vector_to_json(solution.x)},
          {"objective", solution.objective},
          {"status", to_string(solution.status)},
          {"basis", solution.basis},
          {"pivots", solution.pivots}};
}

}  // namespace fracsense
