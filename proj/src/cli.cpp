#include "nwa/cli.hpp"

#include "nwa/bounded.hpp"
#include "nwa/corpus.hpp"
#include "nwa/determinize.hpp"
#include "nwa/errors.hpp"
#include "nwa/evaluator.hpp"
#include "nwa/format.hpp"
#include "nwa/regular.hpp"
#include "nwa/width.hpp"

#include <CLI11.hpp>

#include <istream>
#include <iterator>
#include <ostream>
#include <regex>
#include <sstream>

namespace nwa::cli {

namespace {

struct Options {
    std::string file = "-";
    std::string word;
    std::string out;
    std::string name;
    std::string lambda;
    std::string method = "regular";
    std::string insert;
    long long horizon = 64;
    long long budget = 1'000'000;
    long long pos = 0;
    int width = 0;
    int trace_periods = 1;
    bool trace = false;
    std::size_t cap = 1'000'000;
    int jobs = 1;
};

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string in_quotes(const std::string& s) { return "\"" + s + "\""; }

// Input text with any `result:` lines dropped, so command output can be piped back in.
std::string read_input(const std::string& file, std::istream& in) {
    std::string text;
    if (file == "-" || file.empty())
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    else
        text = read_file(file);
    std::istringstream lines(text);
    std::string line, kept;
    while (std::getline(lines, line))
        if (line.rfind("result:", 0) != 0)
            kept += line + "\n";
    return kept;
}

Nwa load(const Options& o, std::istream& in) { return parse_nwa(read_input(o.file, in)); }

// Sidecar text on stdout goes out as comments so the NWA stays parseable.
std::string as_comments(const std::string& text) {
    std::istringstream lines(text);
    std::string line, out;
    while (std::getline(lines, line))
        out += "# " + line + "\n";
    return out;
}

void emit(std::ostream& out, const std::string& text, const std::string& path) {
    if (path.empty())
        out << text;
    else
        write_file(path, text);
}

Rational parse_lambda(const std::string& s) {
    static const std::regex form(R"(-?[0-9]+(/[0-9]+)?)");
    if (!std::regex_match(s, form))
        throw usage_error("--lambda takes an integer or p/q, got '" + s + "'");
    return parse_rational(s);
}

int cmd_validate(const Options& o, std::istream& in, std::ostream& out) {
    Nwa nwa = load(o, in);
    ValidationReport r = validate(nwa);
    for (const auto& item : r.items) {
        out << item.check << ": " << (item.pass ? "pass" : "fail");
        if (!item.detail.empty())
            out << " (" << item.detail << ")";
        out << "\n";
    }
    out << "result: valid=true deterministic=" << (r.deterministic ? "true" : "false") << "\n";
    return ok;
}

int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
    Nwa nwa = load(o, in);
    LassoWord w = parse_lasso(o.word, nwa.alphabet);
    EvalOptions opts;
    opts.horizon = o.horizon;
    opts.budget = o.budget;
    Evaluation e = evaluate_lasso(nwa, w, opts);
    if (o.trace) {
        const long long U = w.prefix_length(), P = w.period_length();
        auto window = [&](long long from, long long to, const std::string& label) {
            std::string values;
            for (const auto& s : e.trace)
                if (s.position >= from && s.position <= to) {
                    out << "  " << format_trace_line(s) << "\n";
                    values += (values.empty() ? "" : ",") + s.value.to_string();
                }
            out << label << ": " << values << "\n";
        };
        if (U > 0)
            window(1, U, "prefix");
        for (int k = 1; k <= o.trace_periods; ++k)
            window(U + (k - 1) * P + 1, U + k * P, "period " + std::to_string(k));
    }
    out << "width-observed: " << e.width_observed << "\n";
    if (e.infinite_width_suspect && e.hotspot)
        out << "infinite-width-suspect: hotspot " << *e.hotspot << "\n";
    if (!e.reason.empty())
        out << "note: " << e.reason << "\n";
    out << "result: value=" << e.value.to_string() << " exact=" << (e.exact ? "true" : "false") << "\n";
    return ok;
}

int cmd_finite_width(const Options& o, std::istream& in, std::ostream& out) {
    Nwa nwa = load(o, in);
    FiniteWidthResult r = check_finite_width(nwa, o.cap);
    out << "monitor-states: " << r.monitor_states << "\n";
    if (r.finite) {
        out << "result: verdict=finite\n";
        return ok;
    }
    std::string w = r.witness ? format_lasso(*r.witness, nwa.alphabet) : "";
    out << "witness: " << w << "\n";
    out << "result: verdict=infinite witness=" << in_quotes(w) << "\n";
    return ok;
}

int cmd_emptiness(const Options& o, std::istream& in, std::ostream& out) {
    if (o.lambda.empty())
        throw usage_error("emptiness needs --lambda");
    Rational lambda = parse_lambda(o.lambda);
    Nwa nwa = load(o, in);
    EmptinessVerdict v;
    if (o.method == "regular") {
        v = emptiness_regular(nwa, lambda, o.cap);
    } else {
        int k = o.width > 0 ? o.width : nwa.declared_width.value_or(0);
        if (k <= 0)
            throw usage_error("--method bounded needs --width or a width declaration");
        v = emptiness_bounded(nwa, k, lambda, o.cap);
        out << "width: " << k << "\n";
    }
    auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (const auto& x : xs)
            s += (s.empty() ? "" : " ") + x;
        return s.empty() ? std::string("-") : s;
    };
    out << "infimum: " << v.infimum.to_string() << "\n";
    out << "witness-cycle: " << join(v.witness_cycle) << "\n";
    out << "restriction: " << join(v.restriction) << "\n";
    if (v.witness) {
        std::string w = format_lasso(*v.witness, nwa.alphabet);
        if (w.size() > 400)
            w = "prefix " + std::to_string(v.witness->prefix.size()) + " letters, period " +
                std::to_string(v.witness->period.size()) + " letters";
        out << "witness: " << w << "\n";
    }
    out << "status: " << v.status << "\n";
    out << "result: verdict=" << (v.yes ? "yes" : "no") << " infimum=" << v.infimum.to_string() << "\n";
    return ok;
}

int cmd_reduce(const Options& o, std::istream& in, std::ostream& out) {
    Nwa nwa = load(o, in);
    ReducedAutomaton r = reduce_to_limavg(nwa, o.cap);
    auto [reduced, sidecar] = reduced_as_nwa(r, nwa);
    emit(out, serialize_nwa(reduced), o.out);
    if (!o.out.empty())
        write_file(o.out + ".map", sidecar);
    else
        out << as_comments(sidecar);
    out << "result: states=" << r.graph.node_count << " edges=" << r.graph.edges.size()
        << " nwa-states=" << reduced.master.state_count() << "\n";
    return ok;
}

int cmd_determinize(const Options& o, std::istream& in, std::ostream& out) {
    Nwa nwa = load(o, in);
    DeterminizedNwa d = determinize(nwa, o.cap < 4096 ? o.cap : 4096);
    emit(out, serialize_nwa(d.nwa), o.out);
    if (!o.out.empty())
        write_file(o.out + ".steering", d.sidecar());
    else
        out << as_comments(d.sidecar());
    out << "result: letters=" << d.nwa.alphabet.size()
        << " deterministic=" << (is_deterministic(d.nwa) ? "true" : "false")
        << " states-added=" << (d.states_added ? "true" : "false") << "\n";
    return ok;
}

int cmd_corpus(const Options& o, std::ostream& out) {
    Nwa nwa = corpus_build(o.name);
    emit(out, serialize_nwa(nwa), o.out);
    out << "result: corpus=" << nwa.name << " master-states=" << nwa.master.state_count()
        << " slaves=" << nwa.slaves.size() << "\n";
    return ok;
}

int cmd_graph(const Options& o, std::istream& in, std::ostream& out) {
    Nwa nwa = load(o, in);
    int k = o.width > 0 ? o.width : nwa.declared_width.value_or(0);
    if (k <= 0)
        throw usage_error("graph needs --width or a width declaration");
    KConfigGraph g = build_config_graph(nwa, k, o.cap);
    emit(out, to_dot(g, nwa), o.out);
    std::size_t good_edges = 0;
    for (const auto& e : g.edges)
        good_edges += g.good[e.source] && g.good[e.target];
    out << "result: nodes=" << g.nodes.size() << " good=" << g.good_count() << " edges=" << good_edges << "\n";
    return ok;
}

int cmd_barrier(const Options& o, std::istream& in, std::ostream& out) {
    Nwa nwa = load(o, in);
    LassoWord w = parse_lasso(o.word, nwa.alphabet);
    if (o.insert.find('|') != std::string::npos)
        throw usage_error("--insert takes plain letters");
    std::vector<int> u = parse_lasso("| " + o.insert, nwa.alphabet).period;
    if (u.empty())
        throw usage_error("--insert needs at least one letter");
    BarrierReport r = check_barrier(nwa, w, o.pos, u, o.horizon);
    for (int i = 0; i < 6; ++i)
        out << "BC" << i + 1 << ": " << to_string(r.bc[i].status)
            << (r.bc[i].detail.empty() ? "" : " (" + r.bc[i].detail + ")") << "\n";
    out << "N: " << barrier_bound(nwa).bound << "\n";
    out << "result: barrier=" << to_string(r.is_barrier()) << " window=" << r.window << "\n";
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Nested weighted automata toolkit", "nwa"};
    app.require_subcommand(1, 1);
    app.add_option("--cap", o.cap, "State cap for constructions")->check(CLI::PositiveNumber);
    app.add_option("--jobs", o.jobs, "Worker threads (analyses run sequentially)")->check(CLI::PositiveNumber);

    auto file = [&](CLI::App* s) { s->add_option("file", o.file, "NWA file, - for stdin"); };

    auto* validate_cmd = app.add_subcommand("validate", "Check an NWA and report determinism");
    file(validate_cmd);

    auto* eval = app.add_subcommand("eval", "Evaluate a deterministic NWA on a lasso word");
    file(eval);
    eval->add_option("--word", o.word, "Lasso \"u | v\"")->required();
    eval->add_option("--horizon", o.horizon, "Periods simulated")->check(CLI::Range(4LL, 1LL << 20));
    eval->add_option("--budget", o.budget, "Steps per slave run")->check(CLI::PositiveNumber);
    eval->add_flag("--trace", o.trace, "Print slave outcomes");
    eval->add_option("--trace-periods", o.trace_periods, "Period windows printed with --trace")
        ->check(CLI::Range(1, 1000));

    auto* fw = app.add_subcommand("finite-width", "Decide whether the width is bounded");
    file(fw);

    auto* em = app.add_subcommand("emptiness", "Is there a word with value <= lambda");
    file(em);
    em->add_option("--lambda", o.lambda, "Threshold p/q")->required();
    em->add_option("--method", o.method, "regular or bounded")->check(CLI::IsMember({"regular", "bounded"}));
    em->add_option("--width", o.width, "Width bound k for --method bounded")->check(CLI::Range(1, 64));

    auto* red = app.add_subcommand("reduce", "Emit the LimAvg reduction of a regular NWA");
    file(red);
    red->add_option("--out", o.out, "Output file (sidecar at FILE.map)");

    auto* det = app.add_subcommand("determinize", "Emit a deterministic NWA over steered letters");
    file(det);
    det->add_option("--out", o.out, "Output file (sidecar at FILE.steering)");

    auto* corpus = app.add_subcommand("corpus", "Print a built-in NWA");
    corpus->add_option("name", o.name, "art aw ae ae_bounded(L,U) dcp mr ex15 ex6")->required();
    corpus->add_option("--out", o.out, "Output file");

    auto* graph = app.add_subcommand("graph", "Export the filtered k-configuration graph as DOT");
    file(graph);
    graph->add_option("--width", o.width, "Width bound k")->check(CLI::Range(1, 64));
    graph->add_option("--out", o.out, "Output DOT file");

    auto* barrier = app.add_subcommand("barrier-check", "Check the barrier conditions for an insertion");
    file(barrier);
    barrier->add_option("--word", o.word, "Lasso \"u | v\"")->required();
    barrier->add_option("--pos", o.pos, "Insertion position i")->required()->check(CLI::NonNegativeNumber);
    barrier->add_option("--insert", o.insert, "Letters of u")->required();
    barrier->add_option("--horizon", o.horizon, "Periods simulated past the insertion")
        ->check(CLI::Range(1LL, 1LL << 20));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage;
    }

    try {
        if (*validate_cmd)
            return cmd_validate(o, in, out);
        if (*eval)
            return cmd_eval(o, in, out);
        if (*fw)
            return cmd_finite_width(o, in, out);
        if (*em)
            return cmd_emptiness(o, in, out);
        if (*red)
            return cmd_reduce(o, in, out);
        if (*det)
            return cmd_determinize(o, in, out);
        if (*corpus)
            return cmd_corpus(o, out);
        if (*graph)
            return cmd_graph(o, in, out);
        if (*barrier)
            return cmd_barrier(o, in, out);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return input;
    } catch (const resource_error& e) {
        err << "resource limit: " << e.what() << "\n";
        return resource;
    }
    return usage;
}

}  // namespace nwa::cli
