#include "spinrestore/io.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace spinrestore::io {

namespace {

template <class Range, class Fn>
std::string json_array(const Range& values, Fn&& fmt_one) {
    std::string out = "[";
    bool first = true;
    for (const auto& v : values) {
        if (!first) out += ',';
        first = false;
        out += fmt_one(v);
    }
    out += ']';
    return out;
}

std::string json_matrix(const Eigen::MatrixXd& m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) out += ',';
        out += '[';
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += json_number(m(r, c));
        }
        out += ']';
    }
    out += ']';
    return out;
}

} // namespace

std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    return fmt::format("{:.12g}", x);
}

std::string json_number(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("JSON cannot represent non-finite numbers");
    return fmt::format("{:.17g}", x);
}

void write_lambda_curve(std::ostream& out, std::span<const LambdaCurvePoint> curve) {
    out << "N,lambda_N,tau_N,best_start\n";
    for (const auto& p : curve) {
        if (p.found)
            out << p.n << ',' << csv_number(p.lambda_n) << ',' << csv_number(p.tau_n) << ',' << p.best_start << '\n';
        else
            out << p.n << ",nan,nan,-1\n";
    }
}

void write_ratio_table(std::ostream& out, std::span<const RatioRow> rows) {
    out << "i,j,tau,ratio,ratio_x2\n";
    for (const auto& r : rows) {
        if (r.found)
            out << r.i << ',' << r.j << ',' << csv_number(r.tau) << ',' << csv_number(r.ratio) << ',' << csv_number(r.ratio_x2) << '\n';
        else
            out << r.i << ',' << r.j << ",nan,nan,nan\n";
    }
}

void write_ratio_distribution(std::ostream& out, std::span<const RatioSample> samples) {
    out << "start_index,ratio,ratio_x2\n";
    for (const auto& s : samples) out << s.start_index << ',' << csv_number(s.ratio) << ',' << csv_number(s.ratio_x2) << '\n';
}

void write_negativity_profile(std::ostream& out, std::span<const NegativityPoint> profile) {
    out << "tau,mean_nsr,n_states\n";
    for (const auto& p : profile)
        out << csv_number(p.tau) << ',' << (p.found ? csv_number(p.mean_nsr) : "nan") << ',' << p.n_states << '\n';
}

void write_negativity_samples(std::ostream& out, double tau, std::span<const double> values) {
    out << "state,tau,nsr\n";
    for (std::size_t k = 0; k < values.size(); ++k) out << k << ',' << csv_number(tau) << ',' << csv_number(values[k]) << '\n';
}

std::string solve_result_json(const SolveResult& r) {
    std::vector<double> re, im;
    for (Eigen::Index k = 0; k < r.scale.lambda1.size(); ++k) {
        re.push_back(r.scale.lambda1(k).real());
        im.push_back(r.scale.lambda1(k).imag());
    }
    return fmt::format(R"({{"tau":{},"start_index":{},"seed":{},"residual_norm":{},"phi":{},"lambda1_re":{},"lambda1_im":{}}})",
                       json_number(r.tau), r.start_index, r.seed, json_number(r.residual_norm),
                       json_array(r.phi, json_number), json_array(re, json_number), json_array(im, json_number));
}

void write_solutions(std::ostream& out, std::span<const SolveResult> results) {
    for (const auto& r : results) out << solve_result_json(r) << '\n';
}

std::string state_json(const ExcitationState& state) {
    return fmt::format(R"({{"dim":{},"re":{},"im":{}}})", state.dim(), json_matrix(state.matrix().real()),
                       json_matrix(state.matrix().imag()));
}

ExcitationState parse_state_json(std::string_view text) {
    const auto doc = nlohmann::json::parse(text);
    const int n = doc.at("dim").get<int>();
    if (n < 1) throw std::invalid_argument("state JSON: dim must be positive");
    const auto& re = doc.at("re");
    const auto& im = doc.at("im");
    const auto size = static_cast<std::size_t>(n + 1);
    if (re.size() != size || im.size() != size) throw std::invalid_argument("state JSON: expected dim+1 rows");
    Eigen::MatrixXcd m(n + 1, n + 1);
    for (std::size_t r = 0; r < size; ++r) {
        if (re[r].size() != size || im[r].size() != size) throw std::invalid_argument("state JSON: expected dim+1 columns");
        for (std::size_t c = 0; c < size; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
    }
    return ExcitationState(std::move(m));
}

} // namespace spinrestore::io
