#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "spinrestore/control.hpp"
#include "spinrestore/excitation.hpp"
#include "spinrestore/protocols.hpp"

namespace spinrestore::io {

/// 12 significant digits, '.' decimal point.
std::string csv_number(double x);
/// 17 significant digits.
std::string json_number(double x);

void write_lambda_curve(std::ostream& out, std::span<const LambdaCurvePoint> curve);
void write_ratio_table(std::ostream& out, std::span<const RatioRow> rows);
void write_ratio_distribution(std::ostream& out, std::span<const RatioSample> samples);
void write_negativity_profile(std::ostream& out, std::span<const NegativityPoint> profile);
void write_negativity_samples(std::ostream& out, double tau, std::span<const double> values);

/// {"tau":..,"start_index":..,"seed":..,"residual_norm":..,"phi":[..],"lambda1_re":[..],"lambda1_im":[..]}
std::string solve_result_json(const SolveResult& result);
void write_solutions(std::ostream& out, std::span<const SolveResult> results);

/// {"dim": n, "re": [[..]], "im": [[..]]}
std::string state_json(const ExcitationState& state);
ExcitationState parse_state_json(std::string_view text);

} // namespace spinrestore::io
