#include "rm2mp/mp_engine.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace rm2mp {

StoichMatrix build_stoich_matrix(const MPGrammar& grammar) {
  StoichMatrix matrix(grammar.metabolites.size(), grammar.rules.size());
  for (std::size_t m = 0; m < grammar.rules.size(); ++m) {
    const Rule& rule = grammar.rules[m];
    for (const MultisetEntry& e : rule.lhs.entries) {
      matrix.set(e.metabolite, m,
                 matrix.at(e.metabolite, m) - static_cast<std::int64_t>(e.count));
    }
    for (const MultisetEntry& e : rule.rhs.entries) {
      matrix.set(e.metabolite, m,
                 matrix.at(e.metabolite, m) + static_cast<std::int64_t>(e.count));
    }
  }
  return matrix;
}

std::vector<Nat> evaluate_fluxes(const MPGrammar& grammar, const MpState& state) {
  std::vector<Nat> flux(grammar.rules.size(), 0);
  for (std::size_t m = 0; m < grammar.rules.size(); ++m) {
    flux[m] = grammar.regulators[m].evaluate(state.values);
  }

  // Condition 2, single simultaneous pass over the phase-1 values. Demands
  // are accumulated in 128-bit so a demand past the Nat range is handled for
  // what it is: certainly larger than the metabolite's value.
  std::vector<__int128> demand(grammar.metabolites.size(), 0);
  for (std::size_t m = 0; m < grammar.rules.size(); ++m) {
    if (flux[m] == 0) continue;
    for (const MultisetEntry& e : grammar.rules[m].lhs.entries) {
      demand[e.metabolite] += static_cast<__int128>(flux[m]) * e.count;
    }
  }
  std::vector<bool> over(grammar.metabolites.size(), false);
  for (std::size_t l = 0; l < grammar.metabolites.size(); ++l) {
    over[l] = demand[l] > static_cast<__int128>(state.values[l]);
  }
  for (std::size_t m = 0; m < grammar.rules.size(); ++m) {
    for (const MultisetEntry& e : grammar.rules[m].lhs.entries) {
      if (over[e.metabolite]) {
        flux[m] = 0;
        break;
      }
    }
  }
  return flux;
}

namespace {

// Per-rule nonzero matrix column, for the run loop's inner step.
struct SparseColumn {
  std::vector<std::pair<std::size_t, std::int64_t>> entries;
};

std::vector<SparseColumn> sparse_columns(const StoichMatrix& matrix) {
  std::vector<SparseColumn> cols(matrix.rule_count());
  for (std::size_t m = 0; m < matrix.rule_count(); ++m) {
    for (std::size_t l = 0; l < matrix.metabolite_count(); ++l) {
      if (std::int64_t a = matrix.at(l, m); a != 0) {
        cols[m].entries.emplace_back(l, a);
      }
    }
  }
  return cols;
}

// state + A*U with 128-bit accumulation: exact and independent of rule
// order. A negative component means the positive control is broken; a
// component past the Nat range raises OverflowError rather than wrapping.
std::vector<Nat> apply_fluxes(const std::vector<Nat>& values,
                              const std::vector<SparseColumn>& columns,
                              const std::vector<Nat>& flux) {
  std::vector<__int128> acc(values.begin(), values.end());
  for (std::size_t m = 0; m < columns.size(); ++m) {
    if (flux[m] == 0) continue;
    for (const auto& [l, a] : columns[m].entries) {
      acc[l] += static_cast<__int128>(a) * static_cast<__int128>(flux[m]);
    }
  }
  std::vector<Nat> next(values.size(), 0);
  for (std::size_t l = 0; l < values.size(); ++l) {
    if (acc[l] < 0) {
      throw std::logic_error(
          "positive control violated: metabolite index " + std::to_string(l) +
          " would go negative");
    }
    if (acc[l] > static_cast<__int128>(~Nat{0})) {
      throw OverflowError("metabolite index " + std::to_string(l) +
                          " left the representable range");
    }
    next[l] = static_cast<Nat>(acc[l]);
  }
  return next;
}

}  // namespace

MpState ema_step(const MPGrammar& grammar, const StoichMatrix& matrix,
                 const MpState& state) {
  std::vector<Nat> flux = evaluate_fluxes(grammar, state);
  MpState next;
  next.values = apply_fluxes(state.values, sparse_columns(matrix), flux);
  next.step = state.step + 1;
  return next;
}

MpTrace mp_run(const MPGrammar& grammar, const MpRunOptions& options) {
  std::optional<std::size_t> halt_index;
  if (options.halt_mode == HaltMode::kHaltMetabolite) {
    halt_index = grammar.index_of("HALT");
    if (!halt_index) {
      throw std::invalid_argument(
          "halt-metabolite mode requires a metabolite named HALT "
          "(use fixed-point mode for grammars without one)");
    }
  }

  const StoichMatrix matrix = build_stoich_matrix(grammar);
  const std::vector<SparseColumn> columns = sparse_columns(matrix);

  MpTrace trace;
  MpState state{grammar.initial, 0};
  trace.states.push_back(state);

  if (halt_index && state.values[*halt_index] >= 1) {
    trace.halted = true;
    trace.halt_step = 0;
    return trace;
  }

  while (trace.steps() < options.max_steps) {
    std::vector<Nat> flux = evaluate_fluxes(grammar, state);
    MpState next;
    next.values = apply_fluxes(state.values, columns, flux);
    next.step = state.step + 1;
    if (options.record_flux) {
      trace.flux_history.push_back(std::move(flux));
    }
    bool unchanged = next.values == state.values;
    state = std::move(next);
    trace.states.push_back(state);

    if (halt_index) {
      if (state.values[*halt_index] >= 1) {
        trace.halted = true;
        trace.halt_step = state.step;
        return trace;
      }
      if (unchanged) {
        trace.fixed_point = true;  // HALT is unreachable from here
        return trace;
      }
    } else if (unchanged) {
      trace.halted = true;
      trace.halt_step = state.step;
      trace.fixed_point = true;
      return trace;
    }
  }
  return trace;
}

}  // namespace rm2mp
