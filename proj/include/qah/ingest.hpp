#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "qah/events.hpp"

namespace qah {

/// Row accounting for one parse pass. events + skipped == rows.
struct SkipReport {
    std::uint64_t rows = 0;
    std::uint64_t events = 0;
    std::uint64_t skipped = 0;
    // Reasons (each skipped row is counted once, first reason wins):
    std::uint64_t missing_user = 0;        // absent/empty OwnerUserId or UserId
    std::uint64_t bad_timestamp = 0;       // absent or unparsable CreationDate
    std::uint64_t ignored_post_type = 0;   // PostTypeId outside {1, 2} or absent
    std::uint64_t unexpected_element = 0;  // child element that is not <row>

    SkipReport& operator+=(const SkipReport& other);
};

using EventSink = std::function<void(const ActivityEvent&)>;

/// Streaming parse of a Stack Exchange Posts dump (root `posts`).
/// PostTypeId 1 becomes a Question event, 2 an Answer; other post types and
/// rows without an owner are tallied and skipped. Throws XmlParseError on
/// malformed XML and std::runtime_error on a wrong root element.
SkipReport parse_stackexchange_posts(std::istream& in, const EventSink& sink);

/// Streaming parse of a Stack Exchange Comments dump (root `comments`).
SkipReport parse_stackexchange_comments(std::istream& in, const EventSink& sink);

/// Dispatches on the root element name (`posts` or `comments`).
SkipReport parse_stackexchange_xml(std::istream& in, const EventSink& sink);

/// Convenience wrappers that collect into a vector.
std::vector<ActivityEvent> parse_stackexchange_posts(std::istream& in, SkipReport* report = nullptr);
std::vector<ActivityEvent> parse_stackexchange_comments(std::istream& in, SkipReport* report = nullptr);
std::vector<ActivityEvent> parse_stackexchange_xml(std::istream& in, SkipReport* report = nullptr);

}  // namespace qah
