#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qah {

/// Fatal XML syntax error. `byte_offset` is the 0-based position of the
/// offending byte in the input stream.
class XmlParseError : public std::runtime_error {
public:
    XmlParseError(const std::string& message, std::uint64_t byte_offset);
    std::uint64_t byte_offset() const { return byte_offset_; }

private:
    std::uint64_t byte_offset_ = 0;
};

/// One row element: its name plus attributes in document order.
struct XmlRow {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;

    /// Value of the named attribute, or nullptr when absent.
    const std::string* find(std::string_view attr) const;
};

/// Pull reader for the flat dump dialect: one root element whose children
/// are attribute-only elements ("rows"). The stream is consumed forward
/// once; memory use is bounded by the largest single element, independent
/// of document length. Accepts an optional UTF-8 BOM, an XML declaration,
/// comments, and both `<row .../>` and `<row ...></row>` child forms. The
/// five standard entities plus numeric character references are decoded in
/// attribute values.
class RowXmlReader {
public:
    explicit RowXmlReader(std::istream& in);  // parses up to the root start tag

    const std::string& root_name() const { return root_name_; }

    /// Advances to the next child element, reusing `row`'s storage.
    /// Returns false once the root close tag has been consumed.
    bool next(XmlRow& row);

    std::uint64_t byte_offset() const { return offset_; }

private:
    int peek();
    int get();
    void unget(int c);
    void refill();
    [[noreturn]] void fail(const std::string& message) const;

    void skip_whitespace();
    void skip_misc();  // whitespace and comments
    void expect(char c);
    std::string read_name();
    void read_attributes(XmlRow& row, bool& self_closing);
    std::string read_attribute_value();
    void decode_entity(std::string& out);

    std::istream& in_;
    std::vector<char> buffer_;
    std::size_t buf_pos_ = 0;
    std::size_t buf_end_ = 0;
    std::uint64_t offset_ = 0;
    int pushback_ = -1;  // one byte of lookahead returned by unget()
    std::string root_name_;
    bool done_ = false;
};

}  // namespace qah
