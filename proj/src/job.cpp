#include "serimat/job.hpp"

#include <ostream>
#include <sstream>

#include "serimat/json_io.hpp"

namespace serimat {

Command parse_command(const std::string& name) {
    if (name == "check") return Command::check;
    if (name == "diagonalize") return Command::diagonalize;
    if (name == "realform") return Command::realform;
    if (name == "svd") return Command::svd;
    if (name == "pullback") return Command::pullback;
    if (name == "verify") return Command::verify;
    throw ParseError("unknown command: " + name);
}

std::string command_name(Command c) {
    switch (c) {
        case Command::check: return "check";
        case Command::diagonalize: return "diagonalize";
        case Command::realform: return "realform";
        case Command::svd: return "svd";
        case Command::pullback: return "pullback";
        default: return "verify";
    }
}

namespace {

struct Header {
    std::vector<std::string> variables;
    unsigned truncation = 0;
    bool exact = true;
    unsigned precision_bits = 256;
    std::string tolerance = "2^-128";
};

Header parse_header(const json& input, const JobSpec& job) {
    check_keys(input, {"format", "variables", "truncation", "backend", "matrix"}, "input");
    for (const char* k : {"format", "variables", "truncation", "backend", "matrix"})
        if (!input.contains(k)) throw SchemaError(std::string("input needs \"") + k + "\"");
    if (input.at("format").get<int>() != 1) throw SchemaError("unsupported format version");

    Header h;
    for (auto& v : input.at("variables")) h.variables.push_back(v.get<std::string>());
    if (h.variables.empty()) throw SchemaError("need at least one variable");
    for (size_t i = 0; i < h.variables.size(); ++i)
        for (size_t j = i + 1; j < h.variables.size(); ++j)
            if (h.variables[i] == h.variables[j]) throw SchemaError("duplicate variable name");
    h.truncation = input.at("truncation").get<unsigned>();

    const json& b = input.at("backend");
    check_keys(b, {"type", "precision_bits", "tolerance"}, "backend");
    std::string type = b.at("type").get<std::string>();
    if (type != "exact" && type != "float") throw SchemaError("backend type must be exact or float");
    h.exact = type == "exact";
    if (b.contains("precision_bits")) h.precision_bits = b.at("precision_bits").get<unsigned>();
    if (b.contains("tolerance")) h.tolerance = b.at("tolerance").get<std::string>();

    if (job.backend_override) h.exact = *job.backend_override == "exact";
    if (job.precision_bits) h.precision_bits = *job.precision_bits;
    if (job.tolerance) h.tolerance = *job.tolerance;
    if (job.truncation_override) h.truncation = *job.truncation_override;
    return h;
}

json header_to_json(const Header& h) {
    json input;
    input["format"] = 1;
    input["variables"] = h.variables;
    input["truncation"] = h.truncation;
    json b;
    b["type"] = h.exact ? "exact" : "float";
    if (!h.exact) {
        b["precision_bits"] = h.precision_bits;
        b["tolerance"] = h.tolerance;
    }
    input["backend"] = b;
    return input;
}

// "X1*X2^2" -> exponent over the named variables.
Exponent parse_monomial(const std::string& text, const std::vector<std::string>& vars) {
    Exponent g(static_cast<unsigned>(vars.size()));
    std::stringstream ss(text);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
        std::string name = factor;
        unsigned long power = 1;
        auto caret = factor.find('^');
        if (caret != std::string::npos) {
            name = factor.substr(0, caret);
            try {
                power = std::stoul(factor.substr(caret + 1));
            } catch (...) {
                throw ParseError("bad exponent in chart map: " + factor);
            }
        }
        bool found = false;
        for (unsigned i = 0; i < vars.size(); ++i)
            if (vars[i] == name) {
                g[i] += static_cast<uint32_t>(power);
                found = true;
                break;
            }
        if (!found) throw ParseError("unknown variable in chart map: " + name);
    }
    if (g.total_degree() == 0) throw OrderViolation("chart map target must have order >= 1");
    return g;
}

template <ScalarField K>
int run_typed(const JobSpec& job, const Header& h, std::ostream& out) {
    unsigned n = static_cast<unsigned>(h.variables.size());
    SeriesMatrix<K> a = matrix_from_json<K>(job.input.at("matrix"), n, h.truncation);

    json bundle;
    bundle["format"] = 1;
    bundle["command"] = command_name(job.command);
    bundle["input"] = header_to_json(h);
    bundle["input"]["matrix"] = job.input.at("matrix");

    int code = 0;
    switch (job.command) {
        case Command::check: {
            auto rep = hypothesis_check(a);
            bundle["result"] = hypothesis_report_to_json(rep);
            if (!rep.monomial_unit) code = static_cast<int>(ErrorClass::hypothesis);
            break;
        }
        case Command::diagonalize: {
            DiagonalizeOptions opts;
            opts.hypothesis_gate = job.hypothesis_gate;
            auto res = diagonalize_normal(a, opts);
            bundle["result"] = diagonalization_to_json(res);
            break;
        }
        case Command::realform: {
            auto res = realify(a);
            bundle["result"] = realform_to_json(res);
            break;
        }
        case Command::svd: {
            SVDOptions opts;
            opts.real = job.real;
            auto res = svd_series(a, opts);
            if (job.refine) res = svd_monomial_refine(a, res);
            bundle["result"] = svd_to_json(res);
            break;
        }
        case Command::pullback: {
            std::vector<Series<K>> targets;
            for (unsigned i = 0; i < n; ++i) {
                auto it = job.chart_map.find(h.variables[i]);
                Exponent g = it == job.chart_map.end()
                                 ? parse_monomial(h.variables[i], h.variables)
                                 : parse_monomial(it->second, h.variables);
                targets.push_back(
                    Series<K>::monomial(n, h.truncation, g, K::one()));
            }
            SeriesMatrix<K> b(a.rows(), a.cols(), n, h.truncation);
            for (unsigned i = 0; i < a.rows(); ++i)
                for (unsigned j = 0; j < a.cols(); ++j)
                    b.at(i, j) = a.at(i, j).substitute(targets);
            // pullback emits a fresh input file so it chains into any command
            bundle = header_to_json(h);
            bundle["matrix"] = matrix_to_json(b);
            break;
        }
        case Command::verify:
            throw ParseError("verify takes a result bundle, not an input file");
    }
    out << bundle.dump(2) << "\n";
    return code;
}

template <ScalarField K>
int verify_typed(const json& bundle, const Header& h, std::ostream& out) {
    unsigned n = static_cast<unsigned>(h.variables.size());
    const json& input = bundle.at("input");
    SeriesMatrix<K> a = matrix_from_json<K>(input.at("matrix"), n, h.truncation);
    const json& result = bundle.at("result");
    std::string cmd = bundle.at("command").get<std::string>();

    double conj_res = 0, unit_res = 0;
    bool pass = true;
    unsigned through = h.truncation;
    if (result.contains("residual"))
        through = result.at("residual").at("reliable_degree").get<unsigned>();

    auto scale2 = a.max_abs2(a.cap());
    auto judge = [&](const SeriesMatrix<K>& r) {
        SeriesMatrix<K> t = r;
        for (unsigned i = 0; i < t.rows(); ++i)
            for (unsigned j = 0; j < t.cols(); ++j) t.at(i, j).set_reliable(through);
        return is_zero_scaled(t, scale2);
    };

    if (cmd == "diagonalize") {
        SeriesMatrix<K> u = matrix_from_json<K>(result.at("unitary"), n, h.truncation);
        std::vector<Series<K>> d;
        for (auto& e : result.at("diagonal"))
            d.push_back(series_from_json<K>(e, n, h.truncation));
        if (u.rows() != a.rows() || d.size() != a.rows())
            throw SchemaError("bundle shapes do not match the input");
        SeriesMatrix<K> dm(a.rows(), a.rows(), n, h.truncation);
        for (unsigned i = 0; i < d.size(); ++i) dm.at(i, i) = d[i];
        SeriesMatrix<K> r1 = u.adjoint() * a * u - dm;
        SeriesMatrix<K> r2 =
            u * u.adjoint() - SeriesMatrix<K>::identity(a.rows(), n, h.truncation);
        conj_res = detail::residual_magnitude(r1, through);
        unit_res = detail::residual_magnitude(r2, through);
        pass = judge(r1) && judge(r2);
    } else if (cmd == "realform") {
        SeriesMatrix<K> o = matrix_from_json<K>(result.at("orthogonal"), n, h.truncation);
        RealNormalForm<K> f{o, result.at("s").get<unsigned>(), {}, {}, {}};
        for (auto& b : result.at("blocks"))
            f.blocks.push_back({series_from_json<K>(b.at("a"), n, h.truncation),
                                series_from_json<K>(b.at("b"), n, h.truncation)});
        for (auto& e : result.at("eigenvalues"))
            f.eigen_real.push_back(series_from_json<K>(e, n, h.truncation));
        if (2 * f.s + f.eigen_real.size() != a.rows())
            throw SchemaError("bundle shapes do not match the input");
        SeriesMatrix<K> assembled = assemble_real_block_matrix(f, n, h.truncation);
        SeriesMatrix<K> r1 = o.transpose() * a * o - assembled;
        SeriesMatrix<K> r2 =
            o.transpose() * o - SeriesMatrix<K>::identity(a.rows(), n, h.truncation);
        conj_res = detail::residual_magnitude(r1, through);
        unit_res = detail::residual_magnitude(r2, through);
        pass = judge(r1) && judge(r2);
        for (unsigned i = 0; i < o.rows() && pass; ++i)
            for (unsigned j = 0; j < o.cols(); ++j)
                if (!detail::series_real_through(o.at(i, j), through)) {
                    pass = false;
                    break;
                }
    } else if (cmd == "svd") {
        SeriesMatrix<K> v = matrix_from_json<K>(result.at("v"), n, h.truncation);
        SeriesMatrix<K> u = matrix_from_json<K>(result.at("u"), n, h.truncation);
        SeriesMatrix<K> dm = matrix_from_json<K>(result.at("d"), n, h.truncation);
        if (v.rows() != a.rows() || u.rows() != a.cols() || dm.rows() != a.rows() ||
            dm.cols() != a.cols())
            throw SchemaError("bundle shapes do not match the input");
        SeriesMatrix<K> r1 = v.adjoint() * a * u - dm;
        SeriesMatrix<K> r2 =
            v.adjoint() * v - SeriesMatrix<K>::identity(v.rows(), n, h.truncation);
        SeriesMatrix<K> r3 =
            u.adjoint() * u - SeriesMatrix<K>::identity(u.rows(), n, h.truncation);
        conj_res = detail::residual_magnitude(r1, through);
        unit_res = std::max(detail::residual_magnitude(r2, through),
                            detail::residual_magnitude(r3, through));
        pass = judge(r1) && judge(r2) && judge(r3);
    } else if (cmd == "check") {
        auto rep = hypothesis_check(a);
        Series<K> delta = series_from_json<K>(result.at("delta"), n, h.truncation);
        pass = equal_through_degree(rep.delta, delta, through) &&
               rep.l_star == result.at("l_star").get<unsigned>() &&
               rep.monomial_unit == result.at("monomial_unit").get<bool>();
    } else {
        throw SchemaError("verify does not understand command \"" + cmd + "\"");
    }

    json rpt;
    rpt["format"] = 1;
    rpt["command"] = "verify";
    rpt["verified_command"] = cmd;
    rpt["verified"] = pass;
    rpt["max_conjugation_residual"] = conj_res;
    rpt["max_unitarity_residual"] = unit_res;
    rpt["through_degree"] = through;
    out << rpt.dump(2) << "\n";
    return pass ? 0 : static_cast<int>(ErrorClass::tolerance);
}

json error_json(const std::string& command, const Error& e) {
    json j;
    j["format"] = 1;
    j["command"] = command;
    json err;
    err["name"] = e.name();
    err["message"] = e.what();
    err["exit_code"] = e.exit_code();
    j["error"] = err;
    return j;
}

} // namespace

int run_job(const JobSpec& job, std::ostream& out, std::ostream& diag) {
    try {
        Header h = parse_header(job.input, job);
        if (!h.exact) FloatScalar::configure(h.precision_bits, h.tolerance);
        if (h.exact)
            return run_typed<ExactScalar>(job, h, out);
        return run_typed<FloatScalar>(job, h, out);
    } catch (const Error& e) {
        diag << e.what() << "\n";
        out << error_json(command_name(job.command), e).dump(2) << "\n";
        return e.exit_code();
    } catch (const json::exception& e) {
        diag << e.what() << "\n";
        ParseError pe(e.what());
        out << error_json(command_name(job.command), pe).dump(2) << "\n";
        return pe.exit_code();
    }
}

int verify_bundle(const json& bundle, std::ostream& out, std::ostream& diag) {
    try {
        check_keys(bundle, {"format", "command", "input", "result"}, "bundle");
        for (const char* k : {"format", "command", "input", "result"})
            if (!bundle.contains(k)) throw SchemaError(std::string("bundle needs \"") + k + "\"");
        JobSpec no_overrides;
        Header h = parse_header(bundle.at("input"), no_overrides);
        if (!h.exact) FloatScalar::configure(h.precision_bits, h.tolerance);
        if (h.exact)
            return verify_typed<ExactScalar>(bundle, h, out);
        return verify_typed<FloatScalar>(bundle, h, out);
    } catch (const Error& e) {
        diag << e.what() << "\n";
        out << error_json("verify", e).dump(2) << "\n";
        return e.exit_code();
    } catch (const json::exception& e) {
        diag << e.what() << "\n";
        SchemaError se(e.what());
        out << error_json("verify", se).dump(2) << "\n";
        return se.exit_code();
    }
}

} // namespace serimat
