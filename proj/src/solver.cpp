#include "greenshop/solver.hpp"

#include "greenshop/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace greenshop {

std::string to_string(ObjectiveKind kind) {
    switch (kind) {
    case ObjectiveKind::Makespan: return "makespan";
    case ObjectiveKind::Carbon: return "carbon";
    case ObjectiveKind::Energy: return "energy";
    }
    return "unknown";
}

ObjectiveKind parse_objective(const std::string &text) {
    if (text == "makespan") return ObjectiveKind::Makespan;
    if (text == "carbon") return ObjectiveKind::Carbon;
    if (text == "energy") return ObjectiveKind::Energy;
    throw ConfigError("unknown objective '" + text + "' (expected makespan|carbon|energy)");
}

ObjectiveTuple objective_tuple(ObjectiveKind kind, const ObjectiveReport &report) {
    const std::int64_t c = report.carbon ? report.carbon->scaled : 0;
    const std::int64_t e = report.energy.watt_epochs;
    switch (kind) {
    case ObjectiveKind::Makespan: return {{report.makespan, 0, 0}};
    case ObjectiveKind::Carbon: return {{c, e, report.makespan}};
    case ObjectiveKind::Energy: return {{e, c, report.makespan}};
    }
    return {};
}

Epoch stretched_bound(const Rational &stretch, Epoch opt_makespan) {
    if (stretch < Rational(1)) {
        throw ParameterError("stretch factor must be >= 1, got " + stretch.to_string());
    }
    return (stretch * Rational(opt_makespan)).floor();
}

namespace {

using Clock = std::chrono::steady_clock;

struct Option {
    int machine;
    Epoch p;
    std::int64_t watts;
};

struct FlatTask {
    TaskKey key;
    int job = 0;
    Epoch arrival = 0;
    std::vector<int> preds;
    std::vector<int> succs;
    std::vector<Option> options;
    Epoch min_p = 0;
    /// Longest path of minimum processing times over strict successors.
    Epoch tail = 0;
    /// arrival + longest path of minimum processing times over strict predecessors.
    Epoch static_est = 0;
};

/// Instance flattened to dense indices: tasks ordered by (job id, task
/// index), machines by position in the fleet.
struct Flat {
    const Instance *instance = nullptr;
    std::vector<FlatTask> tasks;
    std::vector<int> machine_id;
    std::vector<double> machine_speed;
    /// Machines sharing a class are interchangeable for every task.
    std::vector<int> machine_class;
    /// Per job: every task has at most one predecessor.
    std::vector<bool> job_is_forest;
    Epoch horizon = 0;

    explicit Flat(const Instance &inst) : instance(&inst), horizon(inst.horizon) {
        validate(inst);
        std::vector<const Job *> jobs;
        for (const auto &j : inst.jobs) jobs.push_back(&j);
        std::sort(jobs.begin(), jobs.end(), [](const Job *a, const Job *b) { return a->id < b->id; });

        for (const auto &m : inst.machines) {
            machine_id.push_back(m.id);
            machine_speed.push_back(m.speed.to_double());
        }
        auto machine_index = [&](int id) {
            return static_cast<int>(std::find(machine_id.begin(), machine_id.end(), id) - machine_id.begin());
        };

        for (std::size_t ji = 0; ji < jobs.size(); ++ji) {
            const Job &job = *jobs[ji];
            const int base = static_cast<int>(tasks.size());
            bool forest = true;
            for (const auto &t : job.tasks) {
                FlatTask ft;
                ft.key = {job.id, t.task_index};
                ft.job = static_cast<int>(ji);
                ft.arrival = job.arrival;
                for (int mid : t.eligible_machines) {
                    const Machine &m = inst.machine(mid);
                    ft.options.push_back({machine_index(mid), scaled_duration(t.base_duration, m.speed), m.watts()});
                }
                std::sort(ft.options.begin(), ft.options.end(),
                          [](const Option &a, const Option &b) { return a.machine < b.machine; });
                ft.options.erase(std::unique(ft.options.begin(), ft.options.end(),
                                             [](const Option &a, const Option &b) { return a.machine == b.machine; }),
                                 ft.options.end());
                ft.min_p = std::numeric_limits<Epoch>::max();
                for (const auto &o : ft.options) ft.min_p = std::min(ft.min_p, o.p);
                tasks.push_back(std::move(ft));
            }
            for (auto [u, v] : job.edges) {
                tasks[static_cast<std::size_t>(base + u)].succs.push_back(base + v);
                tasks[static_cast<std::size_t>(base + v)].preds.push_back(base + u);
            }
            const auto order = topological_order(job);
            for (int local : order) {
                auto &t = tasks[static_cast<std::size_t>(base + local)];
                if (t.preds.size() > 1) forest = false;
                t.static_est = t.arrival;
                for (int p : t.preds) {
                    const auto &pt = tasks[static_cast<std::size_t>(p)];
                    t.static_est = std::max(t.static_est, pt.static_est + pt.min_p);
                }
            }
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                auto &t = tasks[static_cast<std::size_t>(base + *it)];
                t.tail = 0;
                for (int s : t.succs) {
                    const auto &st = tasks[static_cast<std::size_t>(s)];
                    t.tail = std::max(t.tail, st.min_p + st.tail);
                }
            }
            job_is_forest.push_back(forest);
        }

        const std::size_t m_count = machine_id.size();
        machine_class.assign(m_count, -1);
        int next_class = 0;
        for (std::size_t a = 0; a < m_count; ++a) {
            if (machine_class[a] >= 0) continue;
            machine_class[a] = next_class;
            const Machine &ma = inst.machines[a];
            for (std::size_t b = a + 1; b < m_count; ++b) {
                const Machine &mb = inst.machines[b];
                if (machine_class[b] >= 0 || ma.power_kw != mb.power_kw || ma.speed != mb.speed) continue;
                bool same = true;
                for (const auto &j : inst.jobs) {
                    for (const auto &t : j.tasks) {
                        if (t.eligible(ma.id) != t.eligible(mb.id)) same = false;
                    }
                }
                if (same) machine_class[b] = next_class;
            }
            ++next_class;
        }
    }

    [[nodiscard]] std::size_t size() const { return tasks.size(); }

    [[nodiscard]] Schedule to_schedule(const std::vector<int> &machine, const std::vector<Epoch> &start) const {
        Schedule s;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            s.assignments[tasks[i].key] = {machine_id[static_cast<std::size_t>(machine[i])], start[i], std::nullopt};
        }
        return s;
    }
};

/// Stops a search by node count or wall clock.
class Budget {
public:
    Budget(const SolveConfig &config) : node_limit_(config.node_limit), time_limit_(config.time_limit) {}

    /// Counts one node; returns false once a limit is exhausted.
    bool tick() {
        if (exhausted_) return false;
        ++nodes_;
        if (node_limit_ && nodes_ > *node_limit_) {
            exhausted_ = true;
        } else if (time_limit_ && (nodes_ & 255U) == 0 && Clock::now() - started_ > *time_limit_) {
            exhausted_ = true;
        }
        return !exhausted_;
    }

    [[nodiscard]] bool exhausted() const { return exhausted_; }
    [[nodiscard]] std::uint64_t nodes() const { return std::min(nodes_, node_limit_.value_or(nodes_)); }

private:
    std::optional<std::uint64_t> node_limit_;
    std::optional<std::chrono::milliseconds> time_limit_;
    Clock::time_point started_ = Clock::now();
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
};

struct Incumbent {
    bool present = false;
    ObjectiveTuple value;
    std::vector<int> machine;
    std::vector<Epoch> start;
};

/// Enumerates semi-active schedules: tasks are appended to machines in
/// non-decreasing (start, task index) order, each at the earliest epoch its
/// job, predecessors and machine allow. Some optimal makespan schedule is
/// always of this form, so the search stays exact while never branching on
/// idle time.
class MakespanSearch {
public:
    MakespanSearch(const Flat &flat, Epoch bound, Budget &budget, Incumbent &best)
        : f_(flat), budget_(budget), best_(best), n_(flat.size()), m_count_(flat.machine_id.size()) {
        limit_ = best_.present ? best_.value.keys[0] : bound + 1;
        free_.assign(m_count_, 0);
        start_.assign(n_, 0);
        completion_.assign(n_, 0);
        machine_.assign(n_, -1);
        pending_preds_.resize(n_);
        est_.resize(n_);
        remaining_work_ = 0;
        for (std::size_t v = 0; v < n_; ++v) {
            pending_preds_[v] = static_cast<int>(f_.tasks[v].preds.size());
            est_[v] = f_.tasks[v].arrival;
            remaining_work_ += f_.tasks[v].min_p;
        }
    }

    void run() { dfs(); }

private:
    struct Candidate {
        Epoch completion;
        Epoch start;
        int task;
        int machine;
        Epoch p;
    };

    void dfs() {
        if (!budget_.tick()) return;
        if (placed_ == n_) {
            if (max_completion_ < limit_) {
                limit_ = max_completion_;
                best_.present = true;
                best_.value = {{max_completion_, 0, 0}};
                best_.machine = machine_;
                best_.start = start_;
            }
            return;
        }
        if (lower_bound() >= limit_) return;

        std::vector<Candidate> cands;
        for (std::size_t v = 0; v < n_; ++v) {
            if (machine_[v] >= 0 || pending_preds_[v] > 0) continue;
            const FlatTask &t = f_.tasks[v];
            seen_.clear();
            for (const auto &o : t.options) {
                const auto m = static_cast<std::size_t>(o.machine);
                const std::pair<int, Epoch> sig{f_.machine_class[m], free_[m]};
                if (std::find(seen_.begin(), seen_.end(), sig) != seen_.end()) continue;
                seen_.push_back(sig);
                const Epoch s = std::max(est_[v], free_[m]);
                if (s < last_start_ || (s == last_start_ && static_cast<int>(v) < last_task_)) continue;
                if (s + o.p + t.tail >= limit_) continue;
                cands.push_back({s + o.p, s, static_cast<int>(v), o.machine, o.p});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) {
            return std::tie(a.completion, a.start, a.task, a.machine) <
                   std::tie(b.completion, b.start, b.task, b.machine);
        });

        for (const auto &c : cands) {
            if (c.completion + f_.tasks[static_cast<std::size_t>(c.task)].tail >= limit_) continue;
            apply(c);
            dfs();
            undo(c);
            if (budget_.exhausted()) return;
        }
    }

    Epoch lower_bound() const {
        Epoch lb = max_completion_;
        Epoch free_sum = 0;
        for (Epoch fr : free_) free_sum += std::max(fr, last_start_);
        const auto m = static_cast<Epoch>(m_count_);
        lb = std::max(lb, (free_sum + remaining_work_ + m - 1) / m);
        for (std::size_t v = 0; v < n_; ++v) {
            if (machine_[v] >= 0 || pending_preds_[v] > 0) continue;
            const FlatTask &t = f_.tasks[v];
            const Epoch e = std::max(est_[v], last_start_);
            Epoch earliest = std::numeric_limits<Epoch>::max();
            for (const auto &o : t.options) {
                earliest = std::min(earliest, std::max(e, free_[static_cast<std::size_t>(o.machine)]) + o.p);
            }
            lb = std::max(lb, earliest + t.tail);
        }
        return lb;
    }

    void apply(const Candidate &c) {
        const auto v = static_cast<std::size_t>(c.task);
        const auto m = static_cast<std::size_t>(c.machine);
        trail_.push_back({free_[m], last_start_, last_task_, max_completion_});
        machine_[v] = c.machine;
        start_[v] = c.start;
        completion_[v] = c.completion;
        free_[m] = c.completion;
        last_start_ = c.start;
        last_task_ = c.task;
        max_completion_ = std::max(max_completion_, c.completion);
        remaining_work_ -= f_.tasks[v].min_p;
        ++placed_;
        for (int s : f_.tasks[v].succs) {
            const auto su = static_cast<std::size_t>(s);
            --pending_preds_[su];
            est_trail_.push_back(est_[su]);
            est_[su] = std::max(est_[su], c.completion);
        }
    }

    void undo(const Candidate &c) {
        const auto v = static_cast<std::size_t>(c.task);
        const auto m = static_cast<std::size_t>(c.machine);
        const auto &succs = f_.tasks[v].succs;
        for (auto it = succs.rbegin(); it != succs.rend(); ++it) {
            const auto su = static_cast<std::size_t>(*it);
            ++pending_preds_[su];
            est_[su] = est_trail_.back();
            est_trail_.pop_back();
        }
        const auto saved = trail_.back();
        trail_.pop_back();
        free_[m] = saved.free;
        last_start_ = saved.last_start;
        last_task_ = saved.last_task;
        max_completion_ = saved.max_completion;
        machine_[v] = -1;
        remaining_work_ += f_.tasks[v].min_p;
        --placed_;
    }

    struct Saved {
        Epoch free;
        Epoch last_start;
        int last_task;
        Epoch max_completion;
    };

    const Flat &f_;
    Budget &budget_;
    Incumbent &best_;
    std::size_t n_;
    std::size_t m_count_;
    Epoch limit_ = 0;
    std::vector<Epoch> free_;
    std::vector<Epoch> start_;
    std::vector<Epoch> completion_;
    std::vector<int> machine_;
    std::vector<int> pending_preds_;
    std::vector<Epoch> est_;
    std::vector<Epoch> est_trail_;
    std::vector<Saved> trail_;
    std::vector<std::pair<int, Epoch>> seen_;
    Epoch remaining_work_ = 0;
    Epoch last_start_ = -1;
    int last_task_ = -1;
    Epoch max_completion_ = 0;
    std::size_t placed_ = 0;
};

/// (primary, secondary) cost pair of the Carbon or Energy objective.
struct Cost {
    static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

    std::int64_t primary = 0;
    std::int64_t secondary = 0;

    [[nodiscard]] bool infinite() const { return primary >= kInf; }
    static Cost inf() { return {kInf, kInf}; }

    friend Cost operator+(Cost a, Cost b) {
        if (a.infinite() || b.infinite()) return inf();
        return {a.primary + b.primary, a.secondary + b.secondary};
    }
    friend Cost operator-(Cost a, Cost b) { return {a.primary - b.primary, a.secondary - b.secondary}; }
    friend auto operator<=>(const Cost &, const Cost &) = default;
};

/// Time-indexed branch and bound for the Carbon and Energy objectives.
///
/// Each node fixes the ready task with the earliest feasible start and
/// branches over every (machine, start) that keeps its dependency chain
/// inside the makespan bound.
///
/// Before branching, earliest starts are pushed forward and latest
/// completions backward through the unplaced tasks against the current
/// machine occupancy; a task left without any free window kills the node.
///
/// The cost bound relaxes machine capacity. For jobs whose DAG is an
/// out-forest (all generator templates), the cheapest placement of a whole
/// unscheduled subtree rooted at a ready task depends only on that task's
/// earliest start, so it is tabulated once per solve by dynamic programming
/// over epochs. Jobs with general DAGs fall back to a per-task cheapest window.
class CostSearch {
public:
    CostSearch(const Flat &flat, const CarbonTrace &trace, ObjectiveKind kind, Epoch bound, Budget &budget,
               Incumbent &best)
        : f_(flat), trace_(trace), kind_(kind), bound_(bound), budget_(budget), best_(best), n_(flat.size()) {
        build_topological_order();
        build_tables();
        busy_.assign(f_.machine_id.size(), {});
        machine_.assign(n_, -1);
        start_.assign(n_, 0);
        completion_.assign(n_, 0);
        pending_preds_.resize(n_);
        for (std::size_t v = 0; v < n_; ++v) pending_preds_[v] = static_cast<int>(f_.tasks[v].preds.size());
        earliest_.assign(n_, 0);
        earliest_completion_.assign(n_, 0);
        deadline_.assign(n_, 0);
    }

    void run() { dfs(); }

    /// Re-optimizes the jobs flagged in `free_job` with every other job held
    /// at its incumbent placement, visiting at most `node_cap` nodes.
    void improve(const std::vector<char> &free_job, std::uint64_t node_cap) {
        if (!best_.present) return;
        std::vector<std::size_t> fixed;
        for (int vi : topo_) {
            const auto v = static_cast<std::size_t>(vi);
            if (free_job[static_cast<std::size_t>(f_.tasks[v].job)]) continue;
            const int m = best_.machine[v];
            const Option &o = *std::find_if(f_.tasks[v].options.begin(), f_.tasks[v].options.end(),
                                            [m](const Option &x) { return x.machine == m; });
            place(v, o, best_.start[v]);
            fixed.push_back(v);
        }
        local_nodes_ = 0;
        local_cap_ = node_cap;
        dfs();
        local_cap_.reset();
        for (auto it = fixed.rbegin(); it != fixed.rend(); ++it) {
            const auto v = *it;
            const int m = machine_[v];
            const Option &o = *std::find_if(f_.tasks[v].options.begin(), f_.tasks[v].options.end(),
                                            [m](const Option &x) { return x.machine == m; });
            unplace(v, o, start_[v]);
        }
    }

private:
    using Interval = std::pair<Epoch, Epoch>;

    [[nodiscard]] Cost placement_cost(const Option &o, Epoch s) const {
        const std::int64_t carbon = o.watts * trace_.window_sum(s, s + o.p);
        const std::int64_t energy = o.watts * o.p;
        return kind_ == ObjectiveKind::Carbon ? Cost{carbon, energy} : Cost{energy, carbon};
    }

    [[nodiscard]] bool forest(std::size_t v) const {
        return f_.job_is_forest[static_cast<std::size_t>(f_.tasks[v].job)];
    }

    [[nodiscard]] Cost table_at(std::size_t v, Epoch t) const {
        if (t < 0) t = 0;
        if (t > bound_) return Cost::inf();
        return table_[v][static_cast<std::size_t>(t)];
    }

    void build_topological_order() {
        std::vector<int> indeg(n_);
        for (std::size_t v = 0; v < n_; ++v) indeg[v] = static_cast<int>(f_.tasks[v].preds.size());
        for (std::size_t v = 0; v < n_; ++v) {
            if (indeg[v] == 0) topo_.push_back(static_cast<int>(v));
        }
        for (std::size_t i = 0; i < topo_.size(); ++i) {
            for (int s : f_.tasks[static_cast<std::size_t>(topo_[i])].succs) {
                if (--indeg[static_cast<std::size_t>(s)] == 0) topo_.push_back(s);
            }
        }
    }

    void build_tables() {
        table_.assign(n_, std::vector<Cost>(static_cast<std::size_t>(bound_) + 2, Cost::inf()));
        for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
            const auto v = static_cast<std::size_t>(*it);
            const FlatTask &t = f_.tasks[v];
            auto &row = table_[v];
            const bool subtree = forest(v);
            for (Epoch s = bound_; s >= 0; --s) {
                Cost best = row[static_cast<std::size_t>(s) + 1];
                if (s >= t.arrival) {
                    for (const auto &o : t.options) {
                        if (s + o.p + t.tail > bound_) continue;
                        Cost c = placement_cost(o, s);
                        if (subtree) {
                            for (int child : t.succs) c = c + table_at(static_cast<std::size_t>(child), s + o.p);
                        }
                        best = std::min(best, c);
                    }
                }
                row[static_cast<std::size_t>(s)] = best;
            }
        }
    }

    /// First s >= lo with [s, s + p) free on m and s + p <= end, or -1.
    [[nodiscard]] Epoch earliest_window(std::size_t m, Epoch lo, Epoch p, Epoch end) const {
        Epoch s = lo;
        for (const auto &[b, c] : busy_[m]) {
            if (c <= s) continue;
            if (s + p <= b) break;
            s = c;
        }
        return s + p <= end ? s : -1;
    }

    /// Last s >= lo with [s, s + p) free on m and s + p <= end, or -1.
    [[nodiscard]] Epoch latest_window(std::size_t m, Epoch lo, Epoch p, Epoch end) const {
        Epoch e = end;
        const auto &busy = busy_[m];
        for (auto it = busy.rbegin(); it != busy.rend(); ++it) {
            if (it->first >= e) continue;
            if (it->second + p <= e) break;
            e = it->first;
        }
        return e - p >= lo ? e - p : -1;
    }

    /// Forward earliest-start and backward deadline propagation. Returns
    /// false when some unplaced task has no free window left.
    bool propagate() {
        for (int vi : topo_) {
            const auto v = static_cast<std::size_t>(vi);
            if (machine_[v] >= 0) continue;
            const FlatTask &t = f_.tasks[v];
            Epoch e = t.arrival;
            for (int p : t.preds) {
                const auto pu = static_cast<std::size_t>(p);
                e = std::max(e, machine_[pu] >= 0 ? completion_[pu] : earliest_completion_[pu]);
            }
            Epoch best_start = -1;
            Epoch best_completion = -1;
            for (const auto &o : t.options) {
                const Epoch s = earliest_window(static_cast<std::size_t>(o.machine), e, o.p, bound_ - t.tail);
                if (s < 0) continue;
                if (best_start < 0 || s < best_start) best_start = s;
                if (best_completion < 0 || s + o.p < best_completion) best_completion = s + o.p;
            }
            if (best_start < 0) return false;
            earliest_[v] = best_start;
            earliest_completion_[v] = best_completion;
        }
        for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
            const auto v = static_cast<std::size_t>(*it);
            if (machine_[v] >= 0) continue;
            const FlatTask &t = f_.tasks[v];
            Epoch d = bound_;
            for (int s : t.succs) d = std::min(d, latest_start_[static_cast<std::size_t>(s)]);
            Epoch latest = -1;
            for (const auto &o : t.options) {
                latest = std::max(latest, latest_window(static_cast<std::size_t>(o.machine), earliest_[v], o.p, d));
            }
            if (latest < 0) return false;
            deadline_[v] = d;
            latest_start_[v] = latest;
        }
        return energetic_ok();
    }

    /// Machine-epoch demand inside every window [a, b) spanned by an
    /// earliest start and a deadline must fit the free capacity there.
    [[nodiscard]] bool energetic_ok() {
        lefts_.clear();
        rights_.clear();
        for (std::size_t v = 0; v < n_; ++v) {
            if (machine_[v] >= 0) continue;
            lefts_.push_back(earliest_[v]);
            rights_.push_back(deadline_[v]);
        }
        std::sort(lefts_.begin(), lefts_.end());
        lefts_.erase(std::unique(lefts_.begin(), lefts_.end()), lefts_.end());
        std::sort(rights_.begin(), rights_.end());
        rights_.erase(std::unique(rights_.begin(), rights_.end()), rights_.end());
        const auto machines = static_cast<Epoch>(busy_.size());
        for (Epoch a : lefts_) {
            for (Epoch b : rights_) {
                if (b <= a) continue;
                Epoch demand = 0;
                for (const auto &busy : busy_) {
                    for (const auto &[bs, be] : busy) demand += std::max<Epoch>(0, std::min(b, be) - std::max(a, bs));
                }
                for (std::size_t v = 0; v < n_; ++v) {
                    if (machine_[v] >= 0) continue;
                    const Epoch p = f_.tasks[v].min_p;
                    const Epoch left = std::max<Epoch>(0, earliest_[v] + p - a);
                    const Epoch right = std::max<Epoch>(0, b - deadline_[v] + p);
                    demand += std::min({b - a, p, left, right});
                }
                if (demand > machines * (b - a)) return false;
            }
        }
        return true;
    }

    /// Bound contribution of unplaced task v at the current node.
    [[nodiscard]] Cost term(std::size_t v) const {
        if (machine_[v] >= 0) return {};
        if (forest(v)) return pending_preds_[v] == 0 ? table_at(v, earliest_[v]) : Cost{};
        return table_at(v, earliest_[v]);
    }

    struct Candidate {
        Cost bound;
        Epoch start;
        int option;
    };

    [[nodiscard]] bool stopped() const { return budget_.exhausted() || (local_cap_ && local_nodes_ >= *local_cap_); }

    void dfs() {
        if (local_cap_ && ++local_nodes_ > *local_cap_) return;
        if (!budget_.tick()) return;
        if (placed_ == n_) {
            const ObjectiveTuple value{{committed_.primary, committed_.secondary, max_completion_}};
            if (!best_.present || value < best_.value) {
                best_.present = true;
                best_.value = value;
                best_.machine = machine_;
                best_.start = start_;
            }
            return;
        }
        latest_start_.assign(n_, 0);
        if (!propagate()) return;

        Cost lb = committed_;
        Epoch ms_lb = max_completion_;
        std::size_t chosen = n_;
        for (std::size_t v = 0; v < n_; ++v) {
            if (machine_[v] >= 0) continue;
            lb = lb + term(v);
            ms_lb = std::max(ms_lb, earliest_completion_[v] + f_.tasks[v].tail);
            if (pending_preds_[v] == 0 && (chosen == n_ || earliest_[v] < earliest_[chosen])) chosen = v;
        }
        if (lb.infinite()) return;
        if (best_.present && ObjectiveTuple{{lb.primary, lb.secondary, ms_lb}} >= best_.value) return;

        const FlatTask &t = f_.tasks[chosen];
        const Cost base = lb - term(chosen);
        const Epoch lo = earliest_[chosen];
        const Epoch hi_end = deadline_[chosen];
        std::vector<Candidate> cands;
        seen_classes_.clear();
        for (std::size_t oi = 0; oi < t.options.size(); ++oi) {
            const Option &o = t.options[oi];
            const auto m = static_cast<std::size_t>(o.machine);
            if (busy_[m].empty()) {
                const int cls = f_.machine_class[m];
                if (std::find(seen_classes_.begin(), seen_classes_.end(), cls) != seen_classes_.end()) continue;
                seen_classes_.push_back(cls);
            }
            // Walk the free gaps of machine m inside [lo, hi_end).
            Epoch gap_begin = lo;
            const auto &busy = busy_[m];
            for (std::size_t bi = 0; bi <= busy.size(); ++bi) {
                const Epoch gap_end = bi < busy.size() ? std::min(busy[bi].first, hi_end) : hi_end;
                for (Epoch s = gap_begin; s + o.p <= gap_end; ++s) {
                    Cost c = base + placement_cost(o, s);
                    for (int child : t.succs) {
                        const auto cu = static_cast<std::size_t>(child);
                        const Cost ready = table_at(cu, std::max(earliest_[cu], s + o.p));
                        if (forest(cu)) {
                            c = c + ready;
                        } else if (pending_preds_[cu] == 1) {
                            c = ready.infinite() ? Cost::inf() : c + (ready - term(cu));
                        }
                    }
                    if (c.infinite()) continue;
                    if (best_.present &&
                        std::pair{c.primary, c.secondary} > std::pair{best_.value.keys[0], best_.value.keys[1]}) {
                        continue;
                    }
                    cands.push_back({c, s, static_cast<int>(oi)});
                }
                if (bi < busy.size()) {
                    gap_begin = std::max(gap_begin, busy[bi].second);
                    if (gap_begin >= hi_end) break;
                }
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) {
            return std::tie(a.bound, a.start, a.option) < std::tie(b.bound, b.start, b.option);
        });

        for (const auto &cand : cands) {
            if (best_.present && std::pair{cand.bound.primary, cand.bound.secondary} >
                                     std::pair{best_.value.keys[0], best_.value.keys[1]}) {
                break;
            }
            const Option &o = t.options[static_cast<std::size_t>(cand.option)];
            place(chosen, o, cand.start);
            dfs();
            unplace(chosen, o, cand.start);
            if (stopped()) return;
        }
    }

    void place(std::size_t v, const Option &o, Epoch s) {
        const auto m = static_cast<std::size_t>(o.machine);
        saved_.push_back({committed_, max_completion_});
        auto &busy = busy_[m];
        busy.insert(std::upper_bound(busy.begin(), busy.end(), Interval{s, s + o.p}), Interval{s, s + o.p});
        machine_[v] = o.machine;
        start_[v] = s;
        completion_[v] = s + o.p;
        committed_ = committed_ + placement_cost(o, s);
        max_completion_ = std::max(max_completion_, s + o.p);
        ++placed_;
        for (int child : f_.tasks[v].succs) --pending_preds_[static_cast<std::size_t>(child)];
    }

    void unplace(std::size_t v, const Option &o, Epoch s) {
        const auto m = static_cast<std::size_t>(o.machine);
        for (int child : f_.tasks[v].succs) ++pending_preds_[static_cast<std::size_t>(child)];
        auto &busy = busy_[m];
        busy.erase(std::find(busy.begin(), busy.end(), Interval{s, s + o.p}));
        machine_[v] = -1;
        --placed_;
        const auto saved = saved_.back();
        saved_.pop_back();
        committed_ = saved.committed;
        max_completion_ = saved.max_completion;
    }

    struct Saved {
        Cost committed;
        Epoch max_completion;
    };

    const Flat &f_;
    const CarbonTrace &trace_;
    ObjectiveKind kind_;
    Epoch bound_;
    Budget &budget_;
    Incumbent &best_;
    std::size_t n_;
    std::vector<int> topo_;
    std::vector<std::vector<Cost>> table_;
    std::vector<std::vector<Interval>> busy_;
    std::vector<int> machine_;
    std::vector<Epoch> start_;
    std::vector<Epoch> completion_;
    std::vector<int> pending_preds_;
    std::vector<Epoch> earliest_;
    std::vector<Epoch> earliest_completion_;
    std::vector<Epoch> deadline_;
    std::vector<Epoch> latest_start_;
    std::vector<Saved> saved_;
    std::vector<int> seen_classes_;
    std::vector<Epoch> lefts_;
    std::vector<Epoch> rights_;
    std::optional<std::uint64_t> local_cap_;
    std::uint64_t local_nodes_ = 0;
    Cost committed_;
    Epoch max_completion_ = 0;
    std::size_t placed_ = 0;
};

void consider_seed(const Instance &instance, const Flat &flat, const CarbonTrace *trace, ObjectiveKind kind,
                   Epoch bound, const Schedule &seed, Incumbent &best) {
    if (seed.assignments.size() != flat.size() || !check_feasible(instance, seed).ok()) return;
    const ObjectiveReport report = evaluate(instance, seed, trace);
    if (report.makespan > bound) return;
    const ObjectiveTuple value = objective_tuple(kind, report);
    if (best.present && !(value < best.value)) return;
    best.present = true;
    best.value = value;
    best.machine.assign(flat.size(), 0);
    best.start.assign(flat.size(), 0);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const Assignment &a = seed.assignments.at(flat.tasks[i].key);
        best.machine[i] = static_cast<int>(std::find(flat.machine_id.begin(), flat.machine_id.end(), a.machine_id) -
                                           flat.machine_id.begin());
        best.start[i] = a.start;
    }
}

constexpr std::size_t kNeighbourhoodJobs = 3;
constexpr std::uint64_t kNeighbourhoodNodes = 5000;
constexpr std::size_t kNeighbourhoodRoundsPerJob = 8;

/// Large-neighbourhood descent ahead of the complete search: small random
/// groups of jobs are re-solved exactly around the incumbent. The draw
/// sequence is fixed, so results depend only on the instance and limits.
void improve_by_neighbourhoods(const Flat &flat, CostSearch &search, const Budget &budget) {
    std::size_t jobs = 0;
    for (const auto &t : flat.tasks) jobs = std::max(jobs, static_cast<std::size_t>(t.job) + 1);
    if (jobs <= kNeighbourhoodJobs) return;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(jobs);
    const std::size_t rounds = kNeighbourhoodRoundsPerJob * jobs;
    for (std::size_t round = 0; round < rounds && !budget.exhausted(); ++round) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i < kNeighbourhoodJobs; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng() % (jobs - i));
            std::swap(order[i], order[j]);
        }
        std::vector<char> free_job(jobs, 0);
        for (std::size_t i = 0; i < kNeighbourhoodJobs; ++i) free_job[order[i]] = 1;
        search.improve(free_job, kNeighbourhoodNodes);
    }
}

} // namespace

namespace {

SolveResult solve_seeded(const Instance &instance, const CarbonTrace *trace, const SolveConfig &config,
                         const std::vector<const Schedule *> &seeds) {
    const auto started = Clock::now();
    const Flat flat(instance);
    if (flat.size() == 0) {
        throw ParameterError("cannot solve an empty instance");
    }
    if (config.makespan_bound && *config.makespan_bound < 1) {
        throw ParameterError("makespan bound must be positive");
    }
    if (config.node_limit && *config.node_limit == 0) {
        throw ParameterError("node limit must be positive");
    }
    if (config.time_limit && config.time_limit->count() <= 0) {
        throw ParameterError("time limit must be positive");
    }
    const Epoch bound = std::min(config.makespan_bound.value_or(instance.horizon), instance.horizon);
    if (config.objective != ObjectiveKind::Makespan) {
        if (trace == nullptr) {
            throw ParameterError(to_string(config.objective) + " objective requires a carbon trace");
        }
        trace->require_covers(bound);
    }

    Incumbent best;
    try {
        consider_seed(instance, flat, trace, config.objective, bound, greedy_baseline(instance), best);
    } catch (const InfeasibleError &) {
    }
    for (const Schedule *seed : seeds) {
        if (seed != nullptr) consider_seed(instance, flat, trace, config.objective, bound, *seed, best);
    }

    Budget budget(config);
    if (config.objective == ObjectiveKind::Makespan) {
        MakespanSearch search(flat, bound, budget, best);
        search.run();
    } else {
        CostSearch search(flat, *trace, config.objective, bound, budget, best);
        improve_by_neighbourhoods(flat, search, budget);
        search.run();
    }

    if (!best.present) {
        throw InfeasibleError(budget.exhausted() ? "no feasible schedule found within the search limits"
                                                 : "no feasible schedule fits the makespan bound " +
                                                       std::to_string(bound));
    }

    SolveResult result;
    result.objective = config.objective;
    result.schedule = flat.to_schedule(best.machine, best.start);
    const auto verdict = check_feasible(instance, result.schedule);
    if (!verdict.ok()) {
        throw std::logic_error("solver produced an infeasible schedule: " + verdict.violations.front().message);
    }
    result.report = evaluate(instance, result.schedule, trace);
    result.objective_value = objective_tuple(config.objective, result.report);
    if (result.report.makespan > bound) {
        throw std::logic_error("solver schedule exceeds its makespan bound");
    }
    result.proven_optimal = !budget.exhausted();
    result.deterministic = !config.time_limit.has_value();
    result.nodes_explored = budget.nodes();
    result.wall_time = Clock::now() - started;
    return result;
}

} // namespace

SolveResult solve(const Instance &instance, const CarbonTrace *trace, const SolveConfig &config,
                  const Schedule *warm_start) {
    return solve_seeded(instance, trace, config, {warm_start});
}

BilevelResult solve_bilevel(const Instance &instance, const CarbonTrace &trace, ObjectiveKind objective,
                            const Rational &stretch, const SolveLimits &limits) {
    SolveConfig stage1;
    stage1.objective = ObjectiveKind::Makespan;
    stage1.time_limit = limits.time_limit;
    stage1.node_limit = limits.node_limit;
    const SolveResult baseline = solve(instance, &trace, stage1);
    return solve_bilevel(instance, trace, objective, stretch, limits, baseline);
}

BilevelResult solve_bilevel(const Instance &instance, const CarbonTrace &trace, ObjectiveKind objective,
                            const Rational &stretch, const SolveLimits &limits, const SolveResult &baseline,
                            const Schedule *warm_start) {
    if (objective == ObjectiveKind::Makespan) {
        throw ParameterError("the constrained stage optimizes carbon or energy");
    }
    BilevelResult r;
    r.stretch = stretch;
    r.baseline = baseline;
    r.opt_makespan = baseline.report.makespan;
    r.stretched_bound = stretched_bound(stretch, r.opt_makespan);

    SolveConfig stage2;
    stage2.objective = objective;
    stage2.makespan_bound = r.stretched_bound;
    stage2.time_limit = limits.time_limit;
    stage2.node_limit = limits.node_limit;
    r.constrained = solve_seeded(instance, &trace, stage2, {&baseline.schedule, warm_start});

    if (!r.baseline.report.carbon) {
        r.baseline.report.carbon = carbon(instance, r.baseline.schedule, trace);
    }
    r.carbon_savings_pct = savings(*r.baseline.report.carbon, *r.constrained.report.carbon);
    r.energy_savings_pct = savings(r.baseline.report.energy, r.constrained.report.energy);
    return r;
}

Schedule greedy_baseline(const Instance &instance) {
    const Flat flat(instance);
    const std::size_t n = flat.size();
    std::vector<std::vector<std::pair<Epoch, Epoch>>> busy(flat.machine_id.size());
    std::vector<int> pending(n);
    std::vector<Epoch> est(n);
    std::vector<int> machine(n, -1);
    std::vector<Epoch> start(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        pending[v] = static_cast<int>(flat.tasks[v].preds.size());
        est[v] = flat.tasks[v].arrival;
    }
    auto earliest_slot = [&](std::size_t m, Epoch from, Epoch p) {
        Epoch s = from;
        for (auto [b, e] : busy[m]) {
            if (s + p <= b) break;
            s = std::max(s, e);
        }
        return s;
    };

    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        Epoch pick_start = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (machine[v] >= 0 || pending[v] > 0) continue;
            Epoch s_min = std::numeric_limits<Epoch>::max();
            for (const auto &o : flat.tasks[v].options) {
                s_min = std::min(s_min, earliest_slot(static_cast<std::size_t>(o.machine), est[v], o.p));
            }
            if (pick == n || s_min < pick_start) {
                pick = v;
                pick_start = s_min;
            }
        }
        const FlatTask &t = flat.tasks[pick];
        const Option *chosen = nullptr;
        Epoch chosen_start = 0;
        for (const auto &o : t.options) {
            const Epoch s = earliest_slot(static_cast<std::size_t>(o.machine), est[pick], o.p);
            if (chosen == nullptr) {
                chosen = &o;
                chosen_start = s;
                continue;
            }
            const Epoch c = s + o.p;
            const Epoch cc = chosen_start + chosen->p;
            const double sp = flat.machine_speed[static_cast<std::size_t>(o.machine)];
            const double csp = flat.machine_speed[static_cast<std::size_t>(chosen->machine)];
            if (c < cc || (c == cc && sp > csp)) {
                chosen = &o;
                chosen_start = s;
            }
        }
        const auto m = static_cast<std::size_t>(chosen->machine);
        machine[pick] = chosen->machine;
        start[pick] = chosen_start;
        auto &slots = busy[m];
        slots.insert(std::upper_bound(slots.begin(), slots.end(), std::pair{chosen_start, chosen_start + chosen->p}),
                     {chosen_start, chosen_start + chosen->p});
        for (int s : t.succs) {
            const auto su = static_cast<std::size_t>(s);
            --pending[su];
            est[su] = std::max(est[su], chosen_start + chosen->p);
        }
        if (chosen_start + chosen->p > instance.horizon) {
            throw InfeasibleError("list schedule completes " + to_string(t.key) + " at " +
                                  std::to_string(chosen_start + chosen->p) + ", past horizon " +
                                  std::to_string(instance.horizon));
        }
    }
    return flat.to_schedule(machine, start);
}

} // namespace greenshop
