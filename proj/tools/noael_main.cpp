// noael: NOAEL estimation for designed toxicology bioassays via closed
// testing over comparisons against control.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "noael/builtin_data.hpp"
#include "noael/closure.hpp"
#include "noael/csv.hpp"
#include "noael/qmc_mvt.hpp"
#include "noael/report.hpp"
#include "noael/sha256.hpp"
#include "noael/svg_plot.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_data = 3;
constexpr int exit_numeric = 4;

struct InputOpts {
    std::string input;
    std::string dataset;
    std::string endpoint;
    std::string control_label;
    std::string data_dir = "data";
};

void add_input_options(CLI::App* cmd, InputOpts& in, bool need_endpoint) {
    auto* ip = cmd->add_option("--input", in.input, "CSV input path");
    auto* dp = cmd->add_option("--dataset", in.dataset,
                               "bundled dataset name (see `noael datasets`)");
    ip->excludes(dp);
    if (need_endpoint)
        cmd->add_option("--endpoint", in.endpoint,
                        "endpoint kind for --input: continuous|score|incidence")
            ->check(CLI::IsMember({"continuous", "score", "incidence"}));
    cmd->add_option("--control-label", in.control_label,
                    "dose coding of the control group when non-numeric");
    cmd->add_option("--data-dir", in.data_dir,
                    "directory holding optional dataset files (default: data)");
}

noael::EndpointKind parse_endpoint(const std::string& s) {
    if (s == "continuous") return noael::EndpointKind::continuous;
    if (s == "score") return noael::EndpointKind::score;
    if (s == "incidence") return noael::EndpointKind::incidence;
    throw noael::usage_error("unknown endpoint \"" + s + "\"");
}

struct LoadedData {
    noael::DoseResponseDataset ds;
    std::string id;
    std::string sha256;
};

LoadedData load_input(const InputOpts& in) {
    LoadedData out{noael::ContinuousDataset{}, "", ""};
    if (!in.dataset.empty()) {
        out.id = in.dataset;
        if (auto ds = noael::builtin::load(in.dataset)) {
            out.ds = std::move(*ds);
            return out;
        }
        if (in.dataset == "bronch") {
            std::filesystem::path path = std::filesystem::path(in.data_dir) / "bronch.csv";
            std::ifstream f(path);
            if (!f)
                throw noael::data_error("dataset \"bronch\" is not bundled; place the "
                                        "transcribed records at " + path.string() +
                                        " (columns dose,time,status)");
            std::ostringstream buf;
            buf << f.rdbuf();
            out.sha256 = noael::sha256_hex(buf.str());
            out.ds = noael::parse_csv(buf.str(), noael::EndpointKind::incidence,
                                      in.control_label);
            return out;
        }
        throw noael::data_error("unknown dataset \"" + in.dataset + "\"");
    }
    if (in.input.empty())
        throw noael::usage_error("provide --input PATH or --dataset NAME");
    if (in.endpoint.empty())
        throw noael::usage_error("--input requires --endpoint");
    std::ifstream f(in.input);
    if (!f) throw noael::data_error("cannot open input file: " + in.input);
    std::ostringstream buf;
    buf << f.rdbuf();
    out.id = std::filesystem::path(in.input).filename().string();
    out.sha256 = noael::sha256_hex(buf.str());
    out.ds = noael::parse_csv(buf.str(), parse_endpoint(in.endpoint), in.control_label);
    return out;
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw noael::data_error("cannot write output file: " + path);
    f << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NOAEL estimation from dose-response bioassays "
                 "(closed testing over contrasts against control)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("noael ") + noael::version_string);

    // ---- analyze ----
    InputOpts a_in;
    std::string a_method, a_direction, a_hc = "hc3", a_output = "json", a_out_path;
    double a_alpha = 0.05, a_k = 3.0, a_margin = 1.0, a_qmc_error = 1e-5;
    std::uint64_t a_seed = 20230101;
    std::int64_t a_max_points = 8388608;
    bool a_full = false;
    auto* analyze = app.add_subcommand("analyze", "run an analysis and print a report");
    add_input_options(analyze, a_in, true);
    analyze->add_option("--method", a_method, "ctp-pairwise|dunnett|ctp-williams|"
                        "ctp-ratio|ctp-nonparametric|ctp-poly3")
        ->required()
        ->check(CLI::IsMember({"ctp-pairwise", "dunnett", "ctp-williams", "ctp-ratio",
                               "ctp-nonparametric", "ctp-poly3"}));
    analyze->add_option("--direction", a_direction,
                        "one-sided alternative: greater|less")
        ->required()
        ->check(CLI::IsMember({"greater", "less"}));
    analyze->add_option("--alpha", a_alpha, "significance level (default 0.05)");
    analyze->add_option("--hc", a_hc, "covariance: none|hc0|hc1|hc2|hc3 (default hc3)")
        ->check(CLI::IsMember({"none", "hc0", "hc1", "hc2", "hc3"}));
    analyze->add_option("--k", a_k, "poly-k exponent (default 3)");
    analyze->add_option("--margin", a_margin, "ratio margin rho0 (default 1)");
    analyze->add_option("--seed", a_seed, "QMC seed (default 20230101)");
    analyze->add_option("--qmc-error", a_qmc_error, "QMC absolute error target (default 1e-5)");
    analyze->add_option("--qmc-max-points", a_max_points, "QMC point budget");
    analyze->add_option("--output", a_output, "report format: json|tsv (default json)")
        ->check(CLI::IsMember({"json", "tsv"}));
    analyze->add_option("--out", a_out_path, "write the report to a file instead of stdout");
    analyze->add_flag("--full-precision", a_full, "emit full-precision numbers");

    // ---- plot ----
    InputOpts p_in;
    std::string p_out_path;
    auto* plot = app.add_subcommand("plot", "emit an SVG raw-data summary plot");
    add_input_options(plot, p_in, true);
    plot->add_option("--out", p_out_path, "write the SVG to a file instead of stdout");

    // ---- datasets ----
    bool d_json = false;
    std::string d_data_dir = "data";
    auto* datasets = app.add_subcommand("datasets", "list bundled datasets");
    datasets->add_flag("--json", d_json, "machine-readable listing");
    datasets->add_option("--data-dir", d_data_dir,
                         "directory holding optional dataset files (default: data)");

    // ---- mvt-check ----
    std::string m_upper, m_corr;
    double m_equicorr = std::numeric_limits<double>::quiet_NaN();
    int m_df = 0;
    double m_qmc_error = 1e-5;
    std::uint64_t m_seed = 20230101;
    auto* mvt = app.add_subcommand("mvt-check",
                                   "print P(T <= upper) for a multivariate t/normal");
    mvt->add_option("--upper", m_upper, "comma-separated upper bounds")->required();
    mvt->add_option("--corr", m_corr, "correlation rows, e.g. \"1,.5;.5,1\"");
    mvt->add_option("--equicorr", m_equicorr, "equicorrelation value instead of --corr");
    mvt->add_option("--df", m_df, "degrees of freedom (0 = normal)");
    mvt->add_option("--seed", m_seed, "QMC seed");
    mvt->add_option("--qmc-error", m_qmc_error, "QMC absolute error target");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*analyze) {
            LoadedData data = load_input(a_in);
            noael::AnalysisConfig cfg;
            cfg.alpha = a_alpha;
            cfg.direction = a_direction == "less" ? noael::Direction::less
                                                  : noael::Direction::greater;
            cfg.hc_kind = a_hc == "none" ? noael::HcKind::none
                        : a_hc == "hc0" ? noael::HcKind::hc0
                        : a_hc == "hc1" ? noael::HcKind::hc1
                        : a_hc == "hc2" ? noael::HcKind::hc2
                                        : noael::HcKind::hc3;
            cfg.method = a_method == "ctp-pairwise" ? noael::Method::ctp_pairwise
                       : a_method == "dunnett" ? noael::Method::dunnett
                       : a_method == "ctp-williams" ? noael::Method::ctp_williams
                       : a_method == "ctp-ratio" ? noael::Method::ctp_ratio
                       : a_method == "ctp-nonparametric" ? noael::Method::ctp_nonparametric
                                                         : noael::Method::ctp_poly3;
            cfg.poly_k = a_k;
            cfg.ratio_margin = a_margin;
            cfg.qmc_seed = a_seed;
            cfg.qmc_error_target = a_qmc_error;
            cfg.qmc_max_points = a_max_points;

            noael::ReportDocument doc;
            doc.dataset_id = data.id;
            doc.config = cfg;
            doc.input_sha256 = data.sha256;
            doc.full_precision = a_full;
            doc.analysis = noael::run_analysis(data.ds, cfg);
            write_out(a_out_path, a_output == "json" ? noael::to_json_string(doc)
                                                     : noael::to_tsv(doc));
            return exit_ok;
        }
        if (*plot) {
            LoadedData data = load_input(p_in);
            write_out(p_out_path, noael::svg_plot(data.ds, data.id));
            return exit_ok;
        }
        if (*datasets) {
            nlohmann::json listing = nlohmann::json::array();
            for (const auto& info : noael::builtin::catalogue()) {
                nlohmann::json e;
                e["name"] = info.name;
                e["endpoint"] = noael::to_string(info.endpoint);
                e["note"] = info.note;
                if (info.bundled) {
                    e["rows"] = info.rows;
                    e["bundled"] = true;
                } else {
                    std::filesystem::path path =
                        std::filesystem::path(d_data_dir) / (info.name + ".csv");
                    std::ifstream f(path);
                    if (!f) continue;  // optional dataset not installed
                    std::ostringstream buf;
                    buf << f.rdbuf();
                    noael::DoseResponseDataset ds =
                        noael::parse_csv(buf.str(), info.endpoint);
                    int rows = 0;
                    for (const auto& g : noael::groups_of(ds)) rows += g.n;
                    e["rows"] = rows;
                    e["bundled"] = false;
                    e["path"] = path.string();
                    e["sha256"] = noael::sha256_hex(buf.str());
                }
                listing.push_back(std::move(e));
            }
            if (d_json) {
                std::cout << listing.dump(2) << "\n";
            } else {
                for (const auto& e : listing) {
                    std::cout << e["name"].get<std::string>() << "  ("
                              << e["endpoint"].get<std::string>() << ", n="
                              << e["rows"].get<int>() << ")  "
                              << e["note"].get<std::string>() << "\n";
                }
                std::cout << "optional: bronch loads from <data-dir>/bronch.csv; its "
                             "sha256 is reported for provenance\n";
            }
            return exit_ok;
        }
        if (*mvt) {
            std::vector<double> upper;
            {
                std::stringstream ss(m_upper);
                std::string tok;
                while (std::getline(ss, tok, ',')) upper.push_back(std::stod(tok));
            }
            const int dim = static_cast<int>(upper.size());
            noael::CorrelationMatrix corr = noael::CorrelationMatrix::identity(dim);
            if (!m_corr.empty()) {
                std::vector<double> entries;
                std::stringstream rows(m_corr);
                std::string row;
                while (std::getline(rows, row, ';')) {
                    std::stringstream ss(row);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) entries.push_back(std::stod(tok));
                }
                corr = noael::CorrelationMatrix(dim, entries);
            } else if (!std::isnan(m_equicorr)) {
                corr = noael::CorrelationMatrix::equicorrelated(dim, m_equicorr);
            }
            noael::QmcConfig qmc;
            qmc.seed = m_seed;
            qmc.error_target = m_qmc_error;
            noael::QmcResult r = noael::mvt_cdf(upper, corr, m_df, qmc);
            std::printf("value %.10g\nerror_estimate %.3g\npoints_used %lld\ntarget_met %s\n",
                        r.value, r.error_estimate,
                        static_cast<long long>(r.points_used),
                        r.target_met ? "yes" : "no");
            return exit_ok;
        }
    } catch (const noael::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const noael::data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const noael::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }
    return exit_ok;
}
