#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qah/archetype.hpp"
#include "qah/events.hpp"
#include "qah/series.hpp"

namespace qah {

/// Invalid mixture specification; the message names the offending field.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& message) : std::runtime_error(message) {}
};

/// Generation parameters for one archetype population.
///
/// Active months are drawn uniformly in [min_active, max_active] and placed
/// isolated (no two adjacent), so each active month is a peak of its own.
/// Answer counts per active month are 1 + Poisson(answer_rate - 1), giving
/// mean answer_rate and guaranteeing activity; question counts are
/// Poisson(question_rate), except NonRecurring users who post exactly 1
/// question. Shape constraints per archetype: Sporadic spikes all share one
/// height; Frequent users get a unique maximum; Permanent users get two
/// months forced to the maximum.
struct ArchetypeGen {
    std::size_t users = 0;
    double question_rate = 1.0;  // mean questions per active month
    double answer_rate = 1.3;    // mean answers+comments per active month
    int min_active = 1;
    int max_active = 1;
};

struct MixtureSpec {
    int months = 60;
    std::uint64_t seed = 42;
    YearMonth start{2012, 1};
    ArchetypeGen non_recurring;
    ArchetypeGen sporadic;
    ArchetypeGen frequent;
    ArchetypeGen permanent;

    /// The calibrated default mixture: archetype shares 88.4 / 10.1 / 1.3 /
    /// 0.2 percent of `total_users` (rounded; remainder to NonRecurring).
    static MixtureSpec defaults(std::size_t total_users = 1000, int months = 60,
                                std::uint64_t seed = 42);

    const ArchetypeGen& params(Archetype a) const;
    ArchetypeGen& params(Archetype a);

    /// Throws SpecError naming the offending field.
    void validate() const;
};

/// One generated user's series plus ground truth.
struct GeneratedUser {
    std::vector<std::uint32_t> questions;
    std::vector<std::uint32_t> answers;
    Archetype label{};
};

/// Deterministic for fixed (archetype, params, months, seed).
GeneratedUser generate_user(Archetype archetype, const ArchetypeGen& params, int months,
                            std::uint64_t seed);

/// Same, with the default mixture's parameters for the archetype.
GeneratedUser generate_user(Archetype archetype, int months, std::uint64_t seed);

struct GeneratedInstance {
    std::vector<ActivityEvent> events;  // time-ordered
    std::map<std::string, Archetype> labels;
    SeriesMap series;  // the realized series, for round-trip checks
    InstanceWindow window;
};

/// Realizes every user's series as events placed uniformly within their
/// month. User ids are "u000001"... in generation order (NonRecurring,
/// Sporadic, Frequent, Permanent). Per-user seeds derive from (spec.seed,
/// user ordinal), so any one user's data is independent of the others.
GeneratedInstance generate_instance(const MixtureSpec& spec);

/// Key-value spec format, one `key = value` per line, '#' comments:
///
///     months = 60
///     seed = 42
///     start = 2012-01
///     nonrecurring.users = 884
///     nonrecurring.question_rate = 1.0
///     nonrecurring.answer_rate = 1.3
///     nonrecurring.min_active = 1
///     nonrecurring.max_active = 1
///     sporadic.users = 101
///     ...
///
/// Archetype prefixes: nonrecurring, sporadic, frequent, permanent.
/// Unknown keys and unparsable values raise SpecError naming the field;
/// omitted keys keep the default mixture's values.
MixtureSpec parse_mixture_spec(std::istream& in);

/// `user_id,archetype` rows in user-id order.
void write_labels_csv(std::ostream& out, const std::map<std::string, Archetype>& labels);

}  // namespace qah
