#include "ltq/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ltq/scenario_file.hpp"

namespace ltq {

namespace {

std::string num(double x) {
  if (x == kInfiniteQuote) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string threshold_str(int upper) {
  return upper == kUnboundedThreshold ? "inf" : std::to_string(upper);
}

}  // namespace

std::string csv_provenance(const Scenario& s) {
  std::ostringstream out;
  out << "# ltq " << kToolVersion << "\n";
  out << "# scenario " << scenario_hash(s) << " " << s.canonical_string() << "\n";
  return out.str();
}

std::string sweep_to_csv(const Scenario& base, const SweepResult& result) {
  bool with_sim = false;
  for (const SweepRow& row : result.rows) {
    for (const ProblemOutcome& oc : row.outcomes) with_sim |= oc.sim_profit.has_value();
  }

  std::ostringstream out;
  out << csv_provenance(base);
  out << "axis,n_lo,n_hi";
  for (Problem p : result.problems) {
    const std::string tag = problem_name(p);
    out << "," << tag << "_n_star," << tag << "_objective," << tag << "_quote_summary";
    if (with_sim) out << "," << tag << "_sim_mean," << tag << "_sim_half_width";
  }
  out << "\n";
  for (const SweepRow& row : result.rows) {
    out << num(row.axis_value);
    if (row.infeasible_service) {
      out << ",-,-";
    } else {
      out << "," << row.lower << "," << threshold_str(row.upper);
    }
    for (const ProblemOutcome& oc : row.outcomes) {
      if (oc.infeasible_service) {
        out << ",-," << num(0.0) << ",-";
      } else {
        out << "," << oc.threshold << "," << num(oc.objective) << "," << oc.quote_summary;
      }
      if (with_sim) {
        if (oc.sim_profit.has_value()) {
          const Estimate& est = problem_is_social(oc.problem) ? *oc.sim_social : *oc.sim_profit;
          out << "," << num(est.mean) << "," << num(est.half_width);
        } else {
          out << ",,";
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string quote_table_to_csv(const Scenario& s, const QuoteTable& table) {
  std::ostringstream out;
  out << csv_provenance(s);
  out << "n,provider_dynamic,provider_single,social_dynamic,social_single\n";
  for (size_t i = 0; i < table.states.size(); ++i) {
    out << table.states[i];
    for (int j = 0; j < 4; ++j) {
      const QuoteCell& cell = table.columns[j][i];
      switch (cell.tag) {
        case QuoteCell::Tag::finite: out << "," << num(cell.value); break;
        case QuoteCell::Tag::infinite: out << ",inf"; break;
        case QuoteCell::Tag::balk: out << ",-"; break;
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string risk_curves_to_csv(const Scenario& base, const std::vector<RiskCurvePoint>& points) {
  std::ostringstream out;
  out << csv_provenance(base);
  out << "r,provider_dynamic,provider_single,social_dynamic,social_single,"
         "provider_no_comp,social_no_comp,no_comp_empty\n";
  for (const RiskCurvePoint& pt : points) {
    out << num(pt.r) << "," << num(pt.provider_dynamic) << "," << num(pt.provider_single) << ","
        << num(pt.social_dynamic) << "," << num(pt.social_single) << ","
        << num(pt.provider_no_comp) << "," << num(pt.social_no_comp) << ","
        << (pt.no_comp_empty ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string min_capacity_to_csv(const Scenario& money, const MinCapacityCurve& curve) {
  std::ostringstream out;
  out << csv_provenance(money);
  out << "d";
  for (double r : curve.r_values) out << ",mu_min_r=" << num(r);
  out << "\n";
  for (size_t qi = 0; qi < curve.quote_grid.size(); ++qi) {
    out << num(curve.quote_grid[qi]);
    for (size_t ri = 0; ri < curve.r_values.size(); ++ri) {
      out << "," << num(curve.mu_min[ri][qi]);
    }
    out << "\n";
  }
  return out.str();
}

std::string solve_to_csv(const Scenario& s, const SolveResult& result) {
  std::ostringstream out;
  out << csv_provenance(s);
  out << "# problem " << problem_name(result.problem) << " objective " << num(result.objective)
      << "\n";
  out << "n,quote,utility,profit,occupancy\n";
  for (const StateDiagnostic& d : result.per_state) {
    out << d.state << "," << num(d.quote) << "," << num(d.utility) << "," << num(d.profit) << ","
        << num(d.occupancy) << "\n";
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << contents;
}

}  // namespace ltq
