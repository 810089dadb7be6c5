#include "nwa/evaluator.hpp"

#include "nwa/errors.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

namespace nwa {

namespace {

using Table = std::vector<std::vector<int>>;

class Tables {
public:
    explicit Tables(const Nwa& nwa) : nwa_(nwa) {}

    const Table& of(int slave) {
        auto it = cache_.find(slave);
        if (it == cache_.end())
            it = cache_.emplace(slave, nwa_.slave(slave).core.transition_table(nwa_.alphabet.size())).first;
        return it->second;
    }

private:
    const Nwa& nwa_;
    std::map<int, Table> cache_;
};

enum class Run { running, accepted, rejected };

struct Walker {
    const Slave* slave;
    const Table* table;
    int q;
    Summary sum;
    Run status = Run::running;

    Walker(const Slave& s, const Table& t, int state, Summary summary)
        : slave(&s), table(&t), q(state), sum(summary) {
        if (s.core.accepting[q])
            status = Run::accepted;
    }

    void read(int letter) {
        if (status != Run::running)
            return;
        int ti = (*table)[q][letter];
        if (ti < 0) {
            status = Run::rejected;
            return;
        }
        const auto& t = slave->core.transitions[ti];
        sum.push(slave->fn, t.label);
        q = t.target;
        if (slave->core.accepting[q])
            status = Run::accepted;
    }

    /// A backward run that consumed w[1].
    void at_word_start() {
        if (status == Run::running)
            status = slave->core.at_start[q] ? Run::accepted : Run::rejected;
    }
};

Walker start(const Slave& s, const Table& t) {
    if (!s.core.single_initial())
        throw input_error("slave " + std::to_string(s.index) + " needs exactly one initial state");
    return Walker(s, t, s.core.initial.front(), Summary{});
}

[[noreturn]] void horizon_exceeded(int slave, long long position, long long budget) {
    throw resource_error("slave horizon exceeded: slave " + std::to_string(slave) + " invoked at position " +
                         std::to_string(position) + " read more than " + std::to_string(budget) + " letters");
}

SlaveOutcome simulate(const Nwa& nwa, Tables& tables, int j, const LassoWord& word, long long position,
                      long long budget) {
    SlaveOutcome o;
    o.slave = j;
    o.position = position;
    o.first = position;
    o.last = position - 1;
    if (j == 0)
        return o;
    const Slave& s = nwa.slave(j);
    Walker w = start(s, tables.of(j));
    const long long U = word.prefix_length(), P = word.period_length();
    if (j > 0) {
        std::set<std::pair<int, long long>> seen;
        for (long long p = position; w.status == Run::running; ++p) {
            if (o.run_length >= budget)
                horizon_exceeded(j, position, budget);
            if (p > U && !seen.insert({w.q, (p - U - 1) % P}).second) {
                o.status = SlaveOutcome::Status::diverged;
                o.value = ExtendedValue::plus_infinity();
                o.last = -1;
                return o;
            }
            w.read(word.at(p));
            ++o.run_length;
        }
        o.last = position + o.run_length - 1;
    } else {
        for (long long p = position; w.status == Run::running && p >= 1; --p) {
            if (o.run_length >= budget)
                horizon_exceeded(j, position, budget);
            w.read(word.at(p));
            ++o.run_length;
        }
        w.at_word_start();
        o.first = position - o.run_length + 1;
        o.last = position;
    }
    if (w.status == Run::rejected) {
        o.status = SlaveOutcome::Status::rejected;
        o.value = ExtendedValue::plus_infinity();
    } else {
        o.value = w.sum.value(s.fn);
    }
    return o;
}

struct MasterRun {
    std::vector<int> state{};  // state[x]: after x letters
    std::vector<int> label{0};  // label[x]: slave invoked at position x
    long long stuck = 0;        // first position without a transition
};

void extend_master(const Nwa& nwa, const Table& table, const LassoWord& word, MasterRun& m, long long upto) {
    if (m.state.empty())
        m.state.push_back(nwa.master.initial.front());
    while (m.stuck == 0 && static_cast<long long>(m.state.size()) <= upto) {
        long long x = static_cast<long long>(m.state.size());
        int ti = table[m.state.back()][word.at(x)];
        if (ti < 0) {
            m.stuck = x;
            return;
        }
        m.state.push_back(nwa.master.transitions[ti].target);
        m.label.push_back(static_cast<int>(nwa.master.transitions[ti].label));
    }
}

std::vector<SlaveOutcome> run_trace(const Nwa& nwa, Tables& tables, const Table& master_table, MasterRun& m,
                                    const LassoWord& word, long long positions, long long budget) {
    extend_master(nwa, master_table, word, m, positions);
    std::vector<SlaveOutcome> trace;
    for (long long x = 1; x <= positions; ++x) {
        if (m.stuck != 0 && x >= m.stuck)
            break;
        trace.push_back(simulate(nwa, tables, m.label[x], word, x, budget));
    }
    return trace;
}

WidthMeasure width_stats(const std::vector<SlaveOutcome>& trace, long long h1, long long h2, long long h3) {
    WidthMeasure r;
    std::map<long long, int> diff;
    long long end = 0;
    for (const auto& o : trace)
        end = std::max({end, o.position, o.last});
    for (const auto& o : trace) {
        if (o.run_length == 0)
            continue;
        diff[o.first] += 1;
        diff[(o.last < 0 ? end : o.last) + 1] -= 1;
    }
    int active = 0;
    for (const auto& [pos, d] : diff) {
        active += d;
        r.width_observed = std::max(r.width_observed, active);
    }
    std::map<long long, std::array<long long, 3>> counts;
    const long long hs[3] = {h1, h2, h3};
    for (const auto& o : trace) {
        if (o.status != SlaveOutcome::Status::accepted || o.run_length == 0)
            continue;
        long long at = o.slave < 0 ? o.first : o.last;
        for (int k = 0; k < 3; ++k)
            if (o.position <= hs[k])
                counts[at][k] += 1;
    }
    // Only positions inside the shortest horizon: later ones grow just by being reached.
    for (const auto& [pos, c] : counts)
        if (pos <= h1 && c[0] > 0 && c[0] < c[1] && c[1] < c[2]) {
            r.infinite_width_suspect = true;
            r.hotspot = pos;
            r.hotspot_counts = {c[0], c[1], c[2]};
            break;
        }
    return r;
}

struct Val {
    bool reject = false;
    ExtendedValue v;
};

/// Backward invocations at cycle offset r, as a function of the number n of
/// whole master cycles between the invocation and the cycle region start.
class BackwardClass {
public:
    BackwardClass(const Slave& s, const Table& table, const std::vector<int>& cycle, int r, const LassoWord& word,
                  long long base0, std::size_t key_cap)
        : slave_(s), table_(table), word_(word), base0_(base0),
          additive_(s.fn.kind == ValueKind::sum || s.fn.kind == ValueKind::sumplus) {
        Walker w = start(s, table);
        for (int k = r; k >= 0 && w.status == Run::running; --k)
            w.read(cycle[k]);
        if (w.status != Run::running) {
            constant_ = true;
            constant_val_ = w.status == Run::rejected ? Val{true, {}} : Val{false, w.sum.value(s.fn)};
            return;
        }
        partial_acc_ = w.sum.acc;
        keys_.push_back(normalize(w.q, w.sum));
        std::map<std::pair<int, Summary>, std::size_t> index{{keys_.front(), 0}};
        prefix_.push_back(0);
        for (std::size_t i = 0;; ++i) {
            if (keys_.size() > key_cap)
                throw resource_error("backward trajectory exceeds " + std::to_string(key_cap) + " keys");
            Walker b(s, table, keys_[i].first, keys_[i].second);
            for (int k = static_cast<int>(cycle.size()) - 1; k >= 0 && b.status == Run::running; --k)
                b.read(cycle[k]);
            if (b.status != Run::running) {
                term_index_ = static_cast<long long>(i);
                term_reject_ = b.status == Run::rejected;
                term_inc_ = b.sum.acc;
                term_val_ = b.sum.value(s.fn);
                break;
            }
            auto key = normalize(b.q, b.sum);
            prefix_.push_back(prefix_.back() + (additive_ ? Integer(b.sum.acc) : Integer(0)));
            auto it = index.find(key);
            if (it != index.end()) {
                a_ = static_cast<long long>(it->second);
                b_ = static_cast<long long>(i + 1) - a_;
                break;
            }
            index.emplace(key, keys_.size());
            keys_.push_back(key);
        }
        pre_.resize(keys_.size());
    }

    long long n0() const { return constant_ ? 0 : term_index_ >= 0 ? term_index_ + 1 : a_; }
    long long period() const { return constant_ || term_index_ >= 0 ? 1 : b_; }
    /// Value change per period for n >= n0.
    Integer drift() const {
        if (constant_ || term_index_ >= 0 || !additive_)
            return 0;
        return prefix_[a_ + b_] - prefix_[a_];
    }

    Val value_at(long long n) {
        if (constant_)
            return constant_val_;
        if (term_index_ >= 0 && n > term_index_) {
            if (term_reject_)
                return {true, {}};
            if (!additive_)
                return {false, term_val_};
            return {false, ExtendedValue(Rational(partial_acc_ + prefix_[term_index_] + term_inc_))};
        }
        std::size_t k = key_index(n);
        const Val& pre = pre_result(k);
        if (pre.reject || !additive_)
            return pre;
        Integer acc = partial_acc_ + accumulated(n) + Integer(pre_inc_[k]);
        return {false, ExtendedValue(Rational(acc))};
    }

    bool silent() const { return constant_ && !constant_val_.reject && constant_val_.v.is_bottom(); }

private:
    const Slave& slave_;
    const Table& table_;
    const LassoWord& word_;
    long long base0_;
    bool additive_;

    bool constant_ = false;
    Val constant_val_;
    Integer partial_acc_ = 0;
    std::vector<std::pair<int, Summary>> keys_;
    std::vector<Integer> prefix_;  // prefix_[i]: additive increments of the first i cycles
    long long term_index_ = -1;
    bool term_reject_ = false;
    std::int64_t term_inc_ = 0;
    ExtendedValue term_val_;
    long long a_ = 0, b_ = 1;
    std::vector<std::optional<Val>> pre_;
    std::map<std::size_t, std::int64_t> pre_inc_;

    std::pair<int, Summary> normalize(int q, Summary s) const {
        if (additive_)
            s.acc = 0;
        return {q, s};
    }

    std::size_t key_index(long long n) const {
        if (n < static_cast<long long>(keys_.size()))
            return static_cast<std::size_t>(n);
        return static_cast<std::size_t>(a_ + (n - a_) % b_);
    }

    Integer accumulated(long long n) const {
        if (n < static_cast<long long>(prefix_.size()))
            return prefix_[n];
        long long rounds = (n - a_) / b_, rest = (n - a_) % b_;
        return prefix_[a_] + Integer(rounds) * (prefix_[a_ + b_] - prefix_[a_]) + (prefix_[a_ + rest] - prefix_[a_]);
    }

    const Val& pre_result(std::size_t k) {
        if (!pre_[k]) {
            Walker w(slave_, table_, keys_[k].first, keys_[k].second);
            for (long long x = base0_ - 1; x >= 1 && w.status == Run::running; --x)
                w.read(word_.at(x));
            w.at_word_start();
            if (w.status == Run::rejected) {
                pre_[k] = Val{true, {}};
            } else {
                pre_[k] = Val{false, w.sum.value(slave_.fn)};
                pre_inc_[k] = w.sum.acc;
            }
        }
        return *pre_[k];
    }
};

struct Analysis {
    ExtendedValue value;
    bool exact = true;
    std::string reason;
};

constexpr long long period_cap = 1'000'000;
constexpr long long work_cap = 50'000'000;

Analysis analyze(const Nwa& nwa, Tables& tables, const Table& master_table, MasterRun& m, const LassoWord& word,
                 long long budget) {
    const long long U = word.prefix_length(), P = word.period_length();
    std::map<int, long long> seen;
    long long t0 = 0, c = 0;
    for (long long b = 0;; ++b) {
        extend_master(nwa, master_table, word, m, U + b * P);
        if (m.stuck != 0 && m.stuck <= U + b * P)
            return {ExtendedValue::plus_infinity(), true,
                    "master has no transition at position " + std::to_string(m.stuck)};
        int q = m.state[U + b * P];
        auto it = seen.find(q);
        if (it != seen.end()) {
            t0 = it->second;
            c = b - t0;
            break;
        }
        seen.emplace(q, b);
    }
    const long long base0 = U + t0 * P + 1, L = c * P;

    bool master_accepts = false;
    for (long long k = 0; k < L; ++k)
        master_accepts = master_accepts || nwa.master.accepting[m.state[base0 - 1 + k]];
    if (!master_accepts)
        return {ExtendedValue::plus_infinity(), true, "master visits no accepting state on the lasso"};

    auto failed = [&](const SlaveOutcome& o) {
        return Analysis{ExtendedValue::plus_infinity(), true,
                        "slave " + std::to_string(o.slave) + " invoked at position " + std::to_string(o.position) +
                            (o.status == SlaveOutcome::Status::diverged ? " never terminates" : " rejects")};
    };
    for (long long x = 1; x < base0; ++x) {
        SlaveOutcome o = simulate(nwa, tables, m.label[x], word, x, budget);
        if (o.status != SlaveOutcome::Status::accepted)
            return failed(o);
    }

    std::vector<int> cycle(L);
    for (long long k = 0; k < L; ++k)
        cycle[k] = word.at(base0 + k);

    struct Class {
        int slave = 0;
        ExtendedValue constant = ExtendedValue::bottom();
        std::optional<BackwardClass> back;
    };
    std::vector<Class> classes(L);
    const std::size_t key_cap = 1'000'000;
    long long N0 = 0, Q = 1;
    for (long long r = 0; r < L; ++r) {
        Class& cl = classes[r];
        cl.slave = m.label[base0 + r];
        if (cl.slave > 0) {
            SlaveOutcome o = simulate(nwa, tables, cl.slave, word, base0 + r, budget);
            if (o.status != SlaveOutcome::Status::accepted)
                return failed(o);
            cl.constant = o.value;
        } else if (cl.slave < 0) {
            cl.back.emplace(nwa.slave(cl.slave), tables.of(cl.slave), cycle, static_cast<int>(r), word, base0,
                            key_cap);
            N0 = std::max(N0, cl.back->n0());
            Q = std::lcm(Q, cl.back->period());
            if (Q > period_cap)
                return {ExtendedValue::plus_infinity(), false, "backward value period exceeds cap"};
        }
    }
    if ((N0 + Q) * L > work_cap)
        return {ExtendedValue::plus_infinity(), false, "backward transient exceeds cap"};

    for (long long n = 0; n < N0 + Q; ++n)
        for (long long r = 0; r < L; ++r)
            if (classes[r].back && classes[r].back->value_at(n).reject)
                return {ExtendedValue::plus_infinity(), true,
                        "slave " + std::to_string(classes[r].slave) + " invoked at position " +
                            std::to_string(base0 + n * L + r) + " rejects"};

    Rational S0 = 0;
    Integer cum = 0, lowest = 0;
    long long K = 0;
    for (long long j = 0; j < Q; ++j)
        for (long long r = 0; r < L; ++r) {
            Class& cl = classes[r];
            ExtendedValue v = cl.constant;
            Integer d = 0;
            if (cl.back) {
                v = cl.back->value_at(N0 + j).v;
                d = cl.back->drift() * (Q / cl.back->period());
            }
            if (v.is_bottom())
                continue;
            S0 += v.value();
            ++K;
            cum += d;
            lowest = std::min(lowest, cum);
        }
    if (K == 0)
        return {ExtendedValue::plus_infinity(), true, "only silent transitions on the lasso period"};
    if (cum > 0)
        return {ExtendedValue::plus_infinity(), true, "slave values grow without bound"};
    if (cum < 0)
        return {ExtendedValue::minus_infinity(), true, ""};
    return {ExtendedValue(Rational((S0 + Rational(lowest)) / K)), true, ""};
}

}  // namespace

SlaveOutcome simulate_slave(const Nwa& nwa, int slave, const LassoWord& word, long long position, long long budget) {
    require_deterministic(nwa, "slave simulation");
    if (position < 1)
        throw input_error("position must be >= 1");
    if (!nwa.has_slave(slave))
        throw input_error("slave " + std::to_string(slave) + " is not declared");
    Tables tables(nwa);
    return simulate(nwa, tables, slave, word, position, budget);
}

std::vector<Rational> partial_averages(const std::vector<SlaveOutcome>& trace, std::size_t up_to) {
    std::vector<Rational> out;
    Rational sum = 0;
    for (const auto& o : trace) {
        if (out.size() >= up_to)
            break;
        if (o.value.is_bottom())
            continue;
        if (!o.value.is_finite())
            break;
        sum += o.value.value();
        out.push_back(sum / static_cast<long long>(out.size() + 1));
    }
    return out;
}

Evaluation evaluate_lasso(const Nwa& nwa, const LassoWord& word, const EvalOptions& options) {
    require_deterministic(nwa, "evaluation");
    if (word.period.empty())
        throw input_error("lasso period is empty");
    if (options.horizon < 4)
        throw input_error("horizon must be >= 4");
    Tables tables(nwa);
    Table master_table = nwa.master.transition_table(nwa.alphabet.size());
    MasterRun m;
    const long long U = word.prefix_length(), P = word.period_length();

    Evaluation e;
    e.trace = run_trace(nwa, tables, master_table, m, word, U + options.horizon * P, options.budget);
    e.partials = partial_averages(e.trace, e.trace.size());
    WidthMeasure wm =
        width_stats(e.trace, U + options.horizon / 4 * P, U + options.horizon / 2 * P, U + options.horizon * P);
    e.width_observed = wm.width_observed;
    e.infinite_width_suspect = wm.infinite_width_suspect;
    e.hotspot = wm.hotspot;

    Analysis a = analyze(nwa, tables, master_table, m, word, options.budget);
    e.exact = a.exact;
    e.reason = a.reason;
    if (a.exact) {
        e.value = a.value;
    } else {
        // Estimate: least partial average over the second half of the trace.
        e.value = ExtendedValue::plus_infinity();
        for (std::size_t i = e.partials.size() / 2; i < e.partials.size(); ++i)
            e.value = min_value(e.value, ExtendedValue(e.partials[i]));
    }
    return e;
}

WidthMeasure measure_width(const Nwa& nwa, const LassoWord& word, long long horizon, long long budget) {
    require_deterministic(nwa, "width measurement");
    if (horizon < 4)
        throw input_error("horizon must be >= 4");
    Tables tables(nwa);
    Table master_table = nwa.master.transition_table(nwa.alphabet.size());
    MasterRun m;
    const long long U = word.prefix_length(), P = word.period_length();
    auto trace = run_trace(nwa, tables, master_table, m, word, U + horizon * P, budget);
    return width_stats(trace, U + horizon / 4 * P, U + horizon / 2 * P, U + horizon * P);
}

std::string format_trace_line(const SlaveOutcome& o) {
    std::string s = "pos=" + std::to_string(o.position) + " slave=" + std::to_string(o.slave) +
                    " value=" + o.value.to_string() + " span=";
    if (o.run_length == 0)
        s += "-";
    else if (o.last < 0)
        s += std::to_string(o.first) + "..inf";
    else
        s += std::to_string(o.first) + ".." + std::to_string(o.last);
    if (o.status == SlaveOutcome::Status::rejected)
        s += " rejected";
    else if (o.status == SlaveOutcome::Status::diverged)
        s += " diverged";
    return s;
}

}  // namespace nwa
