#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "serimat/errors.hpp"
#include "serimat/job.hpp"
#include "serimat/runtime.hpp"

namespace {

nlohmann::json read_json_file(const std::string& path) {
    std::istream* in = &std::cin;
    std::ifstream file;
    if (path != "-") {
        file.open(path);
        if (!file) throw serimat::ParseError("cannot open " + path);
        in = &file;
    }
    try {
        return nlohmann::json::parse(*in);
    } catch (const nlohmann::json::exception& e) {
        throw serimat::ParseError(e.what());
    }
}

int write_report(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "cannot write " << out_path << "\n";
        return static_cast<int>(serimat::ErrorClass::usage);
    }
    f << text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serimat: normal forms of matrix families over truncated power series"};
    app.require_subcommand(1);

    std::string out_path;
    unsigned threads = 1;
    bool trace = false;
    app.add_option("-o,--output", out_path, "write the JSON report here instead of stdout");
    app.add_option("--threads", threads, "worker threads for matrix products")
        ->envname("SERIMAT_THREADS");
    app.add_flag("--trace", trace, "log per-order lifting residuals to stderr");

    serimat::JobSpec job;
    std::string in_path;
    std::string backend;
    unsigned precision_bits = 0;
    std::string tolerance;
    unsigned truncation = 0;
    std::vector<std::string> maps;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", in_path, "input JSON file (- for stdin)")->required();
        sub->add_option("--backend", backend, "override the backend: exact | float")
            ->check(CLI::IsMember({"exact", "float"}));
        sub->add_option("--precision-bits", precision_bits, "float backend precision")
            ->envname("SERIMAT_PRECISION_BITS");
        sub->add_option("--tolerance", tolerance, "float zero tolerance (2^-k or decimal)");
        sub->add_option("--truncation", truncation, "override the truncation degree");
    };

    CLI::App* check = app.add_subcommand("check", "test the discriminant hypothesis");
    add_common(check);

    CLI::App* diag = app.add_subcommand("diagonalize", "diagonalize a normal family");
    add_common(diag);
    diag->add_flag("--hypothesis-gate", job.hypothesis_gate,
                   "run the hypothesis check before diagonalizing");

    CLI::App* realform = app.add_subcommand("realform", "real orthogonal normal form");
    add_common(realform);

    CLI::App* svd = app.add_subcommand("svd", "singular value decomposition");
    add_common(svd);
    svd->add_flag("--real", job.real, "real input: orthogonal transforms and block form");
    svd->add_flag("--refine", job.refine, "normalize the diagonal to real monomial form");

    CLI::App* pullback = app.add_subcommand("pullback", "substitute a monomial chart map");
    add_common(pullback);
    pullback->add_option("--map", maps, "substitution VAR=MONOMIAL (repeatable)")->required();

    CLI::App* verify = app.add_subcommand("verify", "recompute the residuals of a bundle");
    verify->add_option("input", in_path, "result bundle JSON file (- for stdin)")->required();

    CLI11_PARSE(app, argc, argv);
    serimat::runtime::set_thread_count(threads);
    serimat::runtime::set_trace(trace);

    try {
        std::ostringstream out;
        int code = 0;
        if (verify->parsed()) {
            code = serimat::verify_bundle(read_json_file(in_path), out, std::cerr);
        } else {
            if (check->parsed()) job.command = serimat::Command::check;
            if (diag->parsed()) job.command = serimat::Command::diagonalize;
            if (realform->parsed()) job.command = serimat::Command::realform;
            if (svd->parsed()) job.command = serimat::Command::svd;
            if (pullback->parsed()) {
                job.command = serimat::Command::pullback;
                for (auto& m : maps) {
                    auto eq = m.find('=');
                    if (eq == std::string::npos)
                        throw serimat::ParseError("--map expects VAR=MONOMIAL, got " + m);
                    job.chart_map[m.substr(0, eq)] = m.substr(eq + 1);
                }
            }
            if (!backend.empty()) job.backend_override = backend;
            if (precision_bits) job.precision_bits = precision_bits;
            if (!tolerance.empty()) job.tolerance = tolerance;
            if (truncation) job.truncation_override = truncation;
            job.input = read_json_file(in_path);
            code = serimat::run_job(job, out, std::cerr);
        }
        int wcode = write_report(out_path, out.str());
        return code != 0 ? code : wcode;
    } catch (const serimat::Error& e) {
        std::cerr << e.what() << "\n";
        return e.exit_code();
    }
}
