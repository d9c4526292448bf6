#include "qah/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <utility>

#include "qah/csv.hpp"
#include "qah/rng.hpp"

namespace qah {
namespace {

constexpr std::array<Archetype, 4> kArchetypes{Archetype::NonRecurring, Archetype::Sporadic,
                                               Archetype::Frequent, Archetype::Permanent};

/// Samples `count` distinct integers from [0, bound) (Floyd's algorithm),
/// returned sorted.
std::vector<int> sample_distinct(std::mt19937_64& rng, int count, int bound) {
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(count));
    for (int j = bound - count; j < bound; ++j) {
        const int t = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(j) + 1));
        if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
            chosen.push_back(t);
        } else {
            chosen.push_back(j);
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

/// `count` months in [0, months) with no two adjacent: sample a sorted
/// combination from the shrunk range, then fan positions out by their rank.
std::vector<int> isolated_months(std::mt19937_64& rng, int count, int months) {
    std::vector<int> positions = sample_distinct(rng, count, months - count + 1);
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] += static_cast<int>(i);
    return positions;
}

std::uint32_t shifted_poisson(std::mt19937_64& rng, double mean) {
    // 1 + Poisson(mean - 1): mean preserved, zero excluded.
    return 1 + poisson_draw(rng, mean - 1.0);
}

const char* archetype_key(Archetype a) {
    switch (a) {
        case Archetype::NonRecurring: return "nonrecurring";
        case Archetype::Sporadic: return "sporadic";
        case Archetype::Frequent: return "frequent";
        case Archetype::Permanent: return "permanent";
    }
    return "?";
}

}  // namespace

MixtureSpec MixtureSpec::defaults(std::size_t total_users, int months, std::uint64_t seed) {
    MixtureSpec spec;
    spec.months = months;
    spec.seed = seed;
    spec.non_recurring = ArchetypeGen{0, 1.0, 1.3, 1, 1};
    spec.sporadic = ArchetypeGen{0, 0.8, 2.0, 2, 3};
    // Wide active-month and rate spreads keep the Frequent and Permanent
    // ratio values on many lattice points; a narrow spread would let a
    // higher K split one corner into exact-duplicate clusters and win the
    // silhouette search.
    spec.frequent = ArchetypeGen{0, 1.0, 6.0, 12, 28};
    spec.permanent = ArchetypeGen{0, 1.3, 9.0, 14, 28};

    const auto total = static_cast<double>(total_users);
    spec.sporadic.users = static_cast<std::size_t>(std::llround(total * 0.101));
    spec.frequent.users = static_cast<std::size_t>(std::llround(total * 0.013));
    spec.permanent.users = static_cast<std::size_t>(std::llround(total * 0.002));
    const std::size_t rest = spec.sporadic.users + spec.frequent.users + spec.permanent.users;
    spec.non_recurring.users = total_users > rest ? total_users - rest : 0;
    return spec;
}

const ArchetypeGen& MixtureSpec::params(Archetype a) const {
    switch (a) {
        case Archetype::NonRecurring: return non_recurring;
        case Archetype::Sporadic: return sporadic;
        case Archetype::Frequent: return frequent;
        case Archetype::Permanent: return permanent;
    }
    throw std::logic_error("bad archetype");
}

ArchetypeGen& MixtureSpec::params(Archetype a) {
    return const_cast<ArchetypeGen&>(std::as_const(*this).params(a));
}

void MixtureSpec::validate() const {
    if (months < 1) throw SpecError("months must be at least 1");
    for (Archetype a : kArchetypes) {
        const ArchetypeGen& gen = params(a);
        const std::string prefix = archetype_key(a);
        if (gen.users == 0) continue;
        if (!(gen.question_rate > 0.0)) throw SpecError(prefix + ".question_rate must be positive");
        if (!(gen.answer_rate >= 1.0)) {
            throw SpecError(prefix + ".answer_rate must be at least 1 (every active month answers)");
        }
        if (gen.min_active < 1) throw SpecError(prefix + ".min_active must be at least 1");
        if (gen.max_active < gen.min_active) {
            throw SpecError(prefix + ".max_active must be at least " + prefix + ".min_active");
        }
        if ((a == Archetype::Sporadic || a == Archetype::Permanent) && gen.min_active < 2) {
            throw SpecError(prefix + ".min_active must be at least 2 (equal maxima need two months)");
        }
        if (a == Archetype::NonRecurring && gen.max_active != 1) {
            throw SpecError(prefix + ".max_active must be 1 (one burst of activity)");
        }
        if (months < 2 * gen.max_active - 1) {
            throw SpecError(prefix + ".max_active needs at least " +
                            std::to_string(2 * gen.max_active - 1) +
                            " months to keep active months isolated; months = " +
                            std::to_string(months));
        }
    }
}

GeneratedUser generate_user(Archetype archetype, const ArchetypeGen& params, int months,
                            std::uint64_t seed) {
    if (months < 1) throw SpecError("months must be at least 1");
    if (months < 2 * params.max_active - 1) {
        throw SpecError(std::string(archetype_key(archetype)) +
                        ".max_active does not fit in " + std::to_string(months) + " months");
    }

    std::mt19937_64 rng(seed);
    GeneratedUser user;
    user.label = archetype;
    user.questions.assign(static_cast<std::size_t>(months), 0);
    user.answers.assign(static_cast<std::size_t>(months), 0);

    const int span = params.max_active - params.min_active;
    const int count = params.min_active +
                      (span > 0 ? static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(span) + 1)) : 0);
    const std::vector<int> active = isolated_months(rng, count, months);

    // Questions.
    for (int m : active) {
        const std::uint32_t q = archetype == Archetype::NonRecurring
                                    ? (m == active.front() ? 1u : 0u)
                                    : poisson_draw(rng, params.question_rate);
        user.questions[static_cast<std::size_t>(m)] = q;
    }

    // Answers (plus comments; the series pools them).
    switch (archetype) {
        case Archetype::NonRecurring: {
            user.answers[static_cast<std::size_t>(active.front())] =
                shifted_poisson(rng, params.answer_rate);
            break;
        }
        case Archetype::Sporadic: {
            // All spikes share the first spike's height, so the maxima tie.
            const std::uint32_t height = shifted_poisson(rng, params.answer_rate);
            for (int m : active) user.answers[static_cast<std::size_t>(m)] = height;
            break;
        }
        case Archetype::Frequent: {
            // Per-user rate jitter varies how many distinct monthly counts a
            // user produces, so the population's ratio feature spreads over
            // many values instead of collapsing onto one or two.
            const double rate = params.answer_rate * (0.5 + canonical_double(rng));
            for (int m : active) {
                user.answers[static_cast<std::size_t>(m)] = shifted_poisson(rng, rate);
            }
            // Break any tie at the maximum: Frequent users peak once.
            std::uint32_t max_v = 0;
            for (int m : active) max_v = std::max(max_v, user.answers[static_cast<std::size_t>(m)]);
            int ties = 0;
            for (int m : active) ties += user.answers[static_cast<std::size_t>(m)] == max_v ? 1 : 0;
            if (ties > 1) {
                for (int m : active) {
                    if (user.answers[static_cast<std::size_t>(m)] == max_v) {
                        ++user.answers[static_cast<std::size_t>(m)];
                        break;
                    }
                }
            }
            break;
        }
        case Archetype::Permanent: {
            const double rate = params.answer_rate * (0.5 + canonical_double(rng));
            for (int m : active) {
                user.answers[static_cast<std::size_t>(m)] = shifted_poisson(rng, rate);
            }
            // Force a recurring maximum: two active months share the peak.
            std::uint32_t max_v = 0;
            for (int m : active) max_v = std::max(max_v, user.answers[static_cast<std::size_t>(m)]);
            const std::vector<int> picks = sample_distinct(rng, 2, count);
            user.answers[static_cast<std::size_t>(active[static_cast<std::size_t>(picks[0])])] = max_v;
            user.answers[static_cast<std::size_t>(active[static_cast<std::size_t>(picks[1])])] = max_v;
            break;
        }
    }
    return user;
}

GeneratedUser generate_user(Archetype archetype, int months, std::uint64_t seed) {
    const MixtureSpec defaults = MixtureSpec::defaults();
    return generate_user(archetype, defaults.params(archetype), months, seed);
}

GeneratedInstance generate_instance(const MixtureSpec& spec) {
    spec.validate();

    GeneratedInstance instance;
    instance.window = make_window(spec.start, add_months(spec.start, spec.months - 1));

    // Month boundaries for uniform event placement.
    std::vector<std::int64_t> month_start(static_cast<std::size_t>(spec.months) + 1);
    for (int m = 0; m <= spec.months; ++m) {
        const YearMonth ym = add_months(spec.start, m);
        month_start[static_cast<std::size_t>(m)] =
            timestamp_from_civil(ym.year, ym.month, 1, 0, 0, 0).seconds;
    }

    std::size_t total_users = 0;
    for (Archetype a : kArchetypes) total_users += spec.params(a).users;
    int id_width = 1;
    for (std::size_t p = 10; p < total_users + 1; p *= 10) ++id_width;

    std::uint64_t ordinal = 0;
    for (Archetype a : kArchetypes) {
        const ArchetypeGen& gen = spec.params(a);
        for (std::size_t u = 0; u < gen.users; ++u, ++ordinal) {
            const std::uint64_t user_seed = mix_seed(spec.seed, ordinal);
            GeneratedUser generated = generate_user(a, gen, spec.months, user_seed);

            char buf[32];
            std::snprintf(buf, sizeof buf, "u%0*llu", id_width,
                          static_cast<unsigned long long>(ordinal + 1));
            const std::string id = buf;

            // Events realize the series; a separate derived stream keeps the
            // draw counts of the series generator stable.
            std::mt19937_64 event_rng(mix_seed(user_seed, 0x9e3779b9ULL));
            for (int m = 0; m < spec.months; ++m) {
                const std::int64_t lo = month_start[static_cast<std::size_t>(m)];
                const std::int64_t hi = month_start[static_cast<std::size_t>(m) + 1];
                const auto width = static_cast<std::uint64_t>(hi - lo);
                const std::uint32_t q = generated.questions[static_cast<std::size_t>(m)];
                const std::uint32_t ans = generated.answers[static_cast<std::size_t>(m)];
                for (std::uint32_t i = 0; i < q; ++i) {
                    instance.events.push_back(ActivityEvent{
                        id, Timestamp{lo + static_cast<std::int64_t>(uniform_index(event_rng, width))},
                        EventKind::Question});
                }
                for (std::uint32_t i = 0; i < ans; ++i) {
                    const EventKind kind = canonical_double(event_rng) < 0.5 ? EventKind::Answer
                                                                             : EventKind::Comment;
                    instance.events.push_back(ActivityEvent{
                        id, Timestamp{lo + static_cast<std::int64_t>(uniform_index(event_rng, width))},
                        kind});
                }
            }

            instance.labels.emplace(id, a);
            UserActivitySeries series;
            series.user_id = id;
            series.questions = std::move(generated.questions);
            series.answers = std::move(generated.answers);
            instance.series.emplace(id, std::move(series));
        }
    }
    sort_events(instance.events);
    return instance;
}

MixtureSpec parse_mixture_spec(std::istream& in) {
    MixtureSpec spec = MixtureSpec::defaults();
    // Counts start at zero; a spec that names no users generates nothing.
    spec.non_recurring.users = 0;
    spec.sporadic.users = 0;
    spec.frequent.users = 0;
    spec.permanent.users = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);

        auto trim = [](std::string s) {
            std::size_t b = 0, e = s.size();
            while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
            while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
            return s.substr(b, e - b);
        };
        const std::string text = trim(line);
        if (text.empty()) continue;

        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw SpecError("expected 'key = value' on line " + std::to_string(line_no));
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw SpecError("expected 'key = value' on line " + std::to_string(line_no));
        }

        auto parse_u64 = [&](const char* field) {
            try {
                std::size_t used = 0;
                const unsigned long long v = std::stoull(value, &used);
                if (used != value.size()) throw std::invalid_argument("trailing text");
                return static_cast<std::uint64_t>(v);
            } catch (const std::exception&) {
                throw SpecError(std::string("bad value for ") + field + ": '" + value + "'");
            }
        };
        auto parse_int = [&](const char* field) {
            try {
                std::size_t used = 0;
                const int v = std::stoi(value, &used);
                if (used != value.size()) throw std::invalid_argument("trailing text");
                return v;
            } catch (const std::exception&) {
                throw SpecError(std::string("bad value for ") + field + ": '" + value + "'");
            }
        };
        auto parse_real = [&](const char* field) {
            try {
                std::size_t used = 0;
                const double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument("trailing text");
                return v;
            } catch (const std::exception&) {
                throw SpecError(std::string("bad value for ") + field + ": '" + value + "'");
            }
        };

        if (key == "months") {
            spec.months = parse_int("months");
            continue;
        }
        if (key == "seed") {
            spec.seed = parse_u64("seed");
            continue;
        }
        if (key == "start") {
            const std::optional<YearMonth> ym = parse_year_month(value);
            if (!ym) throw SpecError("bad value for start: '" + value + "' (want YYYY-MM)");
            spec.start = *ym;
            continue;
        }

        const std::size_t dot = key.find('.');
        bool handled = false;
        if (dot != std::string::npos) {
            const std::string prefix = key.substr(0, dot);
            const std::string field = key.substr(dot + 1);
            for (Archetype a : kArchetypes) {
                if (prefix != archetype_key(a)) continue;
                ArchetypeGen& gen = spec.params(a);
                if (field == "users") {
                    gen.users = static_cast<std::size_t>(parse_u64(key.c_str()));
                } else if (field == "question_rate") {
                    gen.question_rate = parse_real(key.c_str());
                } else if (field == "answer_rate") {
                    gen.answer_rate = parse_real(key.c_str());
                } else if (field == "min_active") {
                    gen.min_active = parse_int(key.c_str());
                } else if (field == "max_active") {
                    gen.max_active = parse_int(key.c_str());
                } else {
                    throw SpecError("unknown key '" + key + "' on line " + std::to_string(line_no));
                }
                handled = true;
                break;
            }
        }
        if (!handled) {
            throw SpecError("unknown key '" + key + "' on line " + std::to_string(line_no));
        }
    }
    spec.validate();
    return spec;
}

void write_labels_csv(std::ostream& out, const std::map<std::string, Archetype>& labels) {
    out << "user_id,archetype\n";
    for (const auto& [id, archetype] : labels) {
        write_csv_field(out, id);
        out << ',' << to_string(archetype) << '\n';
    }
}

}  // namespace qah
