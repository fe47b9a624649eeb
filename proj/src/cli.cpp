#include "digitprime/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "digitprime/arith.hpp"
#include "digitprime/boolfn.hpp"
#include "digitprime/budget.hpp"
#include "digitprime/digitclass.hpp"
#include "digitprime/expsum.hpp"
#include "digitprime/kahan.hpp"
#include "digitprime/walsh.hpp"

namespace digitprime::cli {

namespace {

enum class Format { jsonLines, csv };

struct RunConfig {
    std::string command;
    std::vector<int> n_list;
    std::string kind = "lambda";
    std::string function = "majority";
    std::string mode = "typeI";
    std::vector<double> lambdas;
    std::vector<double> deltas{1.0, 1.5, 2.0, 2.5};
    std::vector<std::uint64_t> masks;
    std::vector<std::string> columns;
    std::string input = "-";
    int level_max = 1;
    int k_max = -1;
    int r = 1;
    int m = 10;
    int m1 = 6;
    std::uint64_t freq = 0;
    std::uint64_t max_q = 16;
    std::uint64_t samples = std::uint64_t{1} << 16;
    bool exhaustive = false;
    bool dense = false;
    bool fit = false;
    std::string max_mem;
    std::string format = "json";
    std::string output;
    unsigned threads = 1;
    std::uint64_t segment = std::uint64_t{1} << 16;

    Budget budget() const {
        Budget b = Budget::from_env();
        if (!max_mem.empty()) b.max_bytes = Budget::parse_bytes(max_mem);
        return b;
    }
    StreamOptions stream() const { return StreamOptions{segment, threads}; }
    Format sink_format() const { return format == "csv" ? Format::csv : Format::jsonLines; }

    int single_n() const {
        if (n_list.size() != 1) throw std::invalid_argument(command + ": --n takes exactly one value");
        return n_list.front();
    }
};

// Writes the header record, then data and fit records, one per line.
class RecordSink {
public:
    RecordSink(std::ostream& out, Format format, Json config)
        : out_(out), format_(format), config_(std::move(config)) {
        const Json header{{"record", "header"}, {"version", code_version()}, {"config", config_}};
        if (format_ == Format::jsonLines) {
            out_ << header.dump() << '\n';
        } else {
            out_ << "# digitprime " << code_version() << ' ' << config_.dump() << '\n';
        }
    }

    void data(const std::string& experiment, const Json& fields, double wall_time = 0.0) {
        if (format_ == Format::jsonLines) {
            Json rec{{"record", "data"}, {"experiment", experiment}};
            for (const auto& [k, v] : fields.items()) rec[k] = v;
            rec["wall_time"] = wall_time;
            rec["config"] = config_;
            out_ << rec.dump() << '\n';
            return;
        }
        if (columns_.empty()) {
            for (const auto& [k, v] : fields.items()) columns_.push_back(k);
            for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
            out_ << '\n';
        }
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            out_ << (i ? "," : "") << csv_cell(fields.contains(columns_[i]) ? fields[columns_[i]] : Json());
        }
        out_ << '\n';
    }

    void fit(const std::string& experiment, const DecayFit& fit) {
        Json rec{{"record", "fit"}, {"experiment", experiment}};
        const Json body = fit.to_json();
        for (const auto& [k, v] : body.items()) rec[k] = v;
        if (format_ == Format::jsonLines) {
            rec["config"] = config_;
            out_ << rec.dump() << '\n';
        } else {
            out_ << "# fit " << rec.dump() << '\n';
        }
    }

private:
    static std::string csv_cell(const Json& v) {
        if (v.is_null()) return "";
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
        }
        return v.dump();
    }

    std::ostream& out_;
    Format format_;
    Json config_;
    std::vector<std::string> columns_;
};

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(); }

Json base_config(const RunConfig& c) {
    return Json{{"command", c.command},
                {"max_mem", c.budget().max_bytes},
                {"format", c.format},
                {"output", c.output},
                {"threads", c.threads},
                {"segment", c.segment}};
}

using Handler = std::function<void(const RunConfig&, Json&, std::ostream&)>;

void cmd_sieve_stats(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    const ArithKind kind = parse_arith_kind(c.kind);
    config["n"] = n;
    config["kind"] = to_string(kind);
    RecordSink sink(out, c.sink_format(), config);
    struct Stats {
        KahanSum sum;
        std::uint64_t nonzero = 0;
    };
    const Stats s = reduce_windows(
        n, kind, c.stream(), Stats{},
        [](const SieveWindow& w) {
            Stats part;
            for (const double v : w.values) {
                if (v != 0.0) {
                    part.sum.add(v);
                    ++part.nonzero;
                }
            }
            return part;
        },
        [](Stats& acc, const Stats& part) {
            acc.sum.merge(part.sum);
            acc.nonzero += part.nonzero;
        });
    sink.data("sieve-stats", Json{{"n", n},
                                  {"kind", to_string(kind)},
                                  {"sum", s.sum.value()},
                                  {"nonzero", s.nonzero},
                                  {"sum_over_N", std::ldexp(s.sum.value(), -n)}});
}

void cmd_spectrum(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    const ArithKind kind = parse_arith_kind(c.kind);
    config["n"] = n;
    config["kind"] = to_string(kind);
    if (c.dense) {
        config["dense"] = true;
        const Budget budget = c.budget();
        budget.require_dense(n, 2 * sizeof(double), "spectrum");
        const auto table = sieve_table(n, kind, budget);
        const auto spectrum = fwht(table.values(), budget);
        RecordSink sink(out, c.sink_format(), config);
        for (SubsetMask s = 0; s < spectrum.size(); ++s) {
            sink.data("spectrum", Json{{"mask", s}, {"level", level(s)}, {"coefficient", spectrum[s]}});
        }
        return;
    }
    if (!c.masks.empty()) {
        config["masks"] = c.masks;
        RecordSink sink(out, c.sink_format(), config);
        for (const SubsetMask s : c.masks) {
            sink.data("spectrum", Json{{"mask", s},
                                       {"level", level(s)},
                                       {"coefficient", walsh_coefficient_streaming(n, kind, s, c.stream())}});
        }
        return;
    }
    config["level_max"] = c.level_max;
    RecordSink sink(out, c.sink_format(), config);
    const auto low = low_level_coefficients_streaming(n, kind, c.level_max, c.stream());
    for (std::size_t i = 0; i < low.masks.size(); ++i) {
        sink.data("spectrum", Json{{"mask", low.masks[i]}, {"level", level(low.masks[i])}, {"coefficient", low.coeffs[i]}});
    }
}

void cmd_levels(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    config["n"] = n;
    config["function"] = c.function;
    if (c.function == "majority") {
        const int k_max = c.k_max < 0 ? n : c.k_max;
        config["kmax"] = k_max;
        const auto profile = majority_spectrum_profile(n, k_max);
        RecordSink sink(out, c.sink_format(), config);
        for (int k = 0; k <= k_max; ++k) {
            const double w = profile.levels.weights[k];
            sink.data("levels", Json{{"k", k},
                                     {"weight", w},
                                     {"scaled_weight", w * std::pow(k, 1.5)},
                                     {"coefficient", majority_level_coefficient(n, k)},
                                     {"tail", profile.tail[k]},
                                     {"tail_exact", profile.tail_exact}});
        }
        return;
    }
    const ArithKind kind = parse_arith_kind(c.function);
    const Budget budget = c.budget();
    budget.require_dense(n, 2 * sizeof(double), "levels");
    const auto weights = level_weights(fwht(sieve_table(n, kind, budget).values(), budget));
    const int k_max = c.k_max < 0 ? n : std::min(c.k_max, n);
    config["kmax"] = k_max;
    RecordSink sink(out, c.sink_format(), config);
    for (int k = 0; k <= k_max; ++k) {
        const double w = weights.weights[k];
        sink.data("levels", Json{{"k", k}, {"weight", w}, {"scaled_weight", w * std::pow(k, 1.5)}});
    }
}

void cmd_classes(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    config["n"] = n;
    RecordSink sink(out, c.sink_format(), config);
    const auto sums = digit_class_sums(n, c.stream());
    for (int k = 0; k <= n; ++k) {
        sink.data("classes", Json{{"k", k}, {"s_k", sums.s[k]}, {"symmetrized", symmetrized_value(sums, k)}});
    }
}

void cmd_tails(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    config["n"] = n;
    config["delta"] = c.deltas;
    RecordSink sink(out, c.sink_format(), config);
    const auto sums = digit_class_sums(n, c.stream());
    for (const double delta : c.deltas) {
        const auto t = tail_mass(sums, delta);
        sink.data("tails", Json{{"delta", t.delta},
                                {"delta_sq", t.delta * t.delta},
                                {"mass", t.mass},
                                {"normalized", t.normalized},
                                {"log_normalized", nullable(std::log(t.normalized))}});
    }
}

void cmd_expsum(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    config["n"] = n;
    config["lambda"] = c.lambdas;
    RecordSink sink(out, c.sink_format(), config);
    const auto sums = digit_class_sums(n, c.stream());
    for (const double lambda : c.lambdas) {
        const Complex v = exp_sum(sums, lambda);
        sink.data("expsum", Json{{"lambda", lambda},
                                 {"re", v.real()},
                                 {"im", v.imag()},
                                 {"abs", std::abs(v)},
                                 {"abs_over_psi", std::abs(v) / sums.psi}});
    }
}

void cmd_ufourier(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    if (c.exhaustive && n > 40) throw std::invalid_argument("ufourier: --exhaustive needs n <= 40");
    const std::uint64_t budget = c.exhaustive ? (std::uint64_t{1} << n) : c.samples;
    config["n"] = n;
    config["lambda"] = c.lambdas;
    config["exhaustive"] = c.exhaustive;
    config["samples"] = budget;
    RecordSink sink(out, c.sink_format(), config);
    for (const double lambda : c.lambdas) {
        const auto r = u_fourier_max(n, lambda, budget);
        sink.data("ufourier", Json{{"lambda", lambda},
                                   {"lambda_sq", lambda * lambda},
                                   {"max", r.max},
                                   {"log_max", nullable(std::log(r.max))},
                                   {"argmax", r.argmax},
                                   {"exhaustive", r.exhaustive},
                                   {"evaluated", r.evaluated}});
    }
}

void cmd_type1(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    config["n"] = n;
    config["m1"] = c.m1;
    config["mode"] = c.mode;
    config["lambda"] = c.lambdas;
    BilinearSumConfig bc;
    if (c.mode == "typeI") {
        bc = BilinearSumConfig::type_one(n, c.m1);
    } else if (c.mode == "ones") {
        bc = BilinearSumConfig::type_two_ones(n, c.m1);
    } else if (c.mode == "mobius-lambda") {
        bc = BilinearSumConfig::type_two_moebius_lambda(n, c.m1);
    } else {
        throw std::invalid_argument("type1: unknown mode '" + c.mode + "'");
    }
    RecordSink sink(out, c.sink_format(), config);
    for (const double lambda : c.lambdas) {
        const auto r = bilinear_sum(bc, lambda);
        sink.data("type1", Json{{"lambda", lambda}, {"mode", c.mode}, {"raw", r.raw}, {"normalized", r.normalized}});
    }
}

void cmd_rational(const RunConfig& c, Json& config, std::ostream& out) {
    config["m"] = c.m;
    config["r"] = c.freq;
    config["Q"] = c.max_q;
    const auto a = rational_scan(c.m, c.freq, c.max_q);
    RecordSink sink(out, c.sink_format(), config);
    sink.data("rational", Json{{"m", a.m}, {"r", a.r}, {"a", a.a}, {"q", a.q}, {"theta", a.theta}});
}

void cmd_theorem1(const RunConfig& c, Json& config, std::ostream& out) {
    config["n"] = c.n_list;
    config["fit"] = c.fit;
    const auto scan = theorem1_scan(c.n_list, c.stream());
    RecordSink sink(out, c.sink_format(), config);
    for (const auto& rec : scan.records) sink.data(rec.experiment, rec.results, rec.wall_time);
    if (c.fit && scan.fit) sink.fit("theorem1", *scan.fit);
}

void cmd_theorem2(const RunConfig& c, Json& config, std::ostream& out) {
    const int n = c.single_n();
    config["n"] = n;
    config["r"] = c.r;
    const auto rec = theorem2_scan(n, c.r, c.stream());
    RecordSink sink(out, c.sink_format(), config);
    sink.data(rec.experiment, rec.results, rec.wall_time);
}

void cmd_decay(const RunConfig& c, Json& config, std::ostream& out) {
    config["n"] = c.n_list;
    config["level_max"] = c.level_max;
    config["fit"] = c.fit;
    const auto scan = spectral_decay_scan(c.n_list, c.level_max, c.stream());
    RecordSink sink(out, c.sink_format(), config);
    for (const auto& rec : scan.records) sink.data(rec.experiment, rec.results, rec.wall_time);
    if (c.fit && scan.fit) sink.fit("decay", *scan.fit);
}

void cmd_plotdata(const RunConfig& c, Json&, std::ostream& out) {
    std::vector<Json> records;
    if (c.input == "-") {
        records = read_records(std::cin);
    } else {
        std::ifstream in(c.input);
        if (!in) throw std::invalid_argument("plotdata: cannot open '" + c.input + "'");
        records = read_records(in);
    }
    out << emit_plotdata(records, c.columns);
}

std::string plot_cell(const Json& v) {
    if (v.is_null()) return "nan";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number()) return v.dump();
    throw std::invalid_argument("plotdata: non-numeric value " + v.dump());
}

}  // namespace

std::vector<Json> read_records(std::istream& in) {
    std::vector<Json> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw std::invalid_argument(std::string("malformed record: ") + e.what());
        }
    }
    return out;
}

std::string emit_plotdata(const std::vector<Json>& records, const std::vector<std::string>& columns) {
    if (columns.empty()) throw std::invalid_argument("plotdata: no columns selected");
    std::ostringstream os;
    os << '#';
    for (const auto& col : columns) os << ' ' << col;
    os << '\n';
    for (const auto& rec : records) {
        if (!rec.is_object() || rec.value("record", std::string("data")) != "data") continue;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (!rec.contains(columns[i])) throw std::invalid_argument("plotdata: missing column '" + columns[i] + "'");
            os << (i ? " " : "") << plot_cell(rec[columns[i]]);
        }
        os << '\n';
    }
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Digit-spectral statistics of the von Mangoldt function", "digitprime"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto common = [&c](CLI::App* sub) {
        sub->add_option("--max-mem", c.max_mem, "Dense memory cap in bytes (suffix k/M/G)");
        sub->add_option("--format,--out", c.format, "Output format")
            ->check(CLI::IsMember({"json", "jsonl", "csv"}));
        sub->add_option("-o,--output", c.output, "Output file (default stdout)");
        sub->add_option("--threads", c.threads, "Worker threads for window streaming")
            ->check(CLI::Range(1u, 256u));
        sub->add_option("--segment", c.segment, "Sieve window size (power of two)");
    };
    auto n_one = [&c](CLI::App* sub) {
        sub->add_option("--n", c.n_list, "Bit-length n")->required()->expected(1);
    };
    auto n_many = [&c](CLI::App* sub) {
        sub->add_option("--n", c.n_list, "Comma-separated bit-lengths")->required()->delimiter(',');
    };
    auto lambdas = [&c](CLI::App* sub) {
        sub->add_option("--lambda", c.lambdas, "Comma-separated lambda values in [-pi, pi]")
            ->required()
            ->delimiter(',');
    };

    std::map<CLI::App*, Handler> handlers;
    auto add = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        common(sub);
        handlers[sub] = std::move(h);
        return sub;
    };

    auto* sieve = add("sieve-stats", "Sum and support size of Lambda or mu below 2^n", cmd_sieve_stats);
    n_one(sieve);
    sieve->add_option("--kind", c.kind, "lambda | mu");

    auto* spectrum = add("spectrum", "Walsh coefficients of Lambda or mu", cmd_spectrum);
    n_one(spectrum);
    spectrum->add_option("--kind", c.kind, "lambda | mu");
    spectrum->add_option("--masks", c.masks, "Comma-separated subset masks")->delimiter(',');
    spectrum->add_option("--level-max", c.level_max, "All masks up to this level");
    spectrum->add_flag("--dense", c.dense, "Full dense transform");

    auto* levels = add("levels", "Level weights W_k", cmd_levels);
    n_one(levels);
    levels->add_option("--function", c.function, "majority | lambda | mu");
    levels->add_option("--kmax", c.k_max, "Highest level reported");

    auto* classes = add("classes", "Digit-class sums s_k", cmd_classes);
    n_one(classes);

    auto* tails = add("tails", "Digit-class tail masses", cmd_tails);
    n_one(tails);
    tails->add_option("--delta", c.deltas, "Comma-separated Delta values")->delimiter(',');

    auto* expsum = add("expsum", "Exponential sums over digit sums", cmd_expsum);
    n_one(expsum);
    lambdas(expsum);

    auto* ufourier = add("ufourier", "Largest Fourier coefficient of U_lambda", cmd_ufourier);
    n_one(ufourier);
    lambdas(ufourier);
    ufourier->add_flag("--exhaustive", c.exhaustive, "Scan every frequency");
    ufourier->add_option("--samples", c.samples, "Sample budget when not exhaustive");

    auto* type1 = add("type1", "Type-I / Type-II bilinear sums", cmd_type1);
    n_one(type1);
    lambdas(type1);
    type1->add_option("--m1", c.m1, "Exponent of M1");
    type1->add_option("--mode", c.mode, "typeI | ones | mobius-lambda");

    auto* rational = add("rational", "Best rational approximation of r / 2^m", cmd_rational);
    rational->add_option("--m", c.m, "Modulus exponent")->required();
    rational->add_option("--r", c.freq, "Frequency in [0, 2^m)")->required();
    rational->add_option("--Q", c.max_q, "Largest denominator")->required();

    auto* theorem1 = add("theorem1", "Majority correlation scan", cmd_theorem1);
    n_many(theorem1);
    theorem1->add_flag("--fit", c.fit, "Append the power-law fit record");

    auto* theorem2 = add("theorem2", "Prescribed-digit prime counts", cmd_theorem2);
    n_one(theorem2);
    theorem2->add_option("--r", c.r, "Number of prescribed digits")->required();

    auto* decay = add("decay", "Low-level Walsh coefficient decay scan", cmd_decay);
    n_many(decay);
    decay->add_option("--level-max", c.level_max, "Largest level |S|");
    decay->add_flag("--fit", c.fit, "Append the exp-law fit record");

    auto* plot = add("plotdata", "Columns of JSON-lines records as a plot table", cmd_plotdata);
    plot->add_option("--input", c.input, "Record file, - for stdin");
    plot->add_option("--columns", c.columns, "Comma-separated column names")->required()->delimiter(',');

    std::vector<const char*> argv{"digitprime"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInvalidArguments;
    }

    CLI::App* selected = app.get_subcommands().front();
    c.command = selected->get_name();
    if (c.format == "jsonl") c.format = "json";
    try {
        Json config = base_config(c);
        std::ofstream file;
        std::ostream* sink = &out;
        if (!c.output.empty() && c.output != "-") {
            file.open(c.output, std::ios::binary);
            if (!file) throw std::invalid_argument("cannot open output file '" + c.output + "'");
            sink = &file;
        }
        // nothing is written unless the command succeeds
        std::ostringstream buffer;
        handlers.at(selected)(c, config, buffer);
        *sink << buffer.str();
        sink->flush();
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kExitBudgetExceeded;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidArguments;
    } catch (const ArithmeticOverflow& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidArguments;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace digitprime::cli
