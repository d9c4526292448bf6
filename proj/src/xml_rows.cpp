#include "qah/xml_rows.hpp"

namespace qah {
namespace {

constexpr std::size_t kBufferSize = 1 << 16;

bool is_space(int c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool is_name_start(int c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
}

bool is_name_char(int c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

/// Encodes one code point as UTF-8.
void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

XmlParseError::XmlParseError(const std::string& message, std::uint64_t byte_offset)
    : std::runtime_error(message + " (byte " + std::to_string(byte_offset) + ")"),
      byte_offset_(byte_offset) {}

const std::string* XmlRow::find(std::string_view attr) const {
    for (const auto& [name, value] : attrs) {
        if (name == attr) return &value;
    }
    return nullptr;
}

RowXmlReader::RowXmlReader(std::istream& in) : in_(in), buffer_(kBufferSize) {
    // Optional UTF-8 BOM.
    if (peek() == 0xEF) {
        get();
        if (get() != 0xBB || get() != 0xBF) fail("malformed byte-order mark");
    }
    skip_misc();
    // Optional XML declaration.
    if (peek() == '<') {
        get();
        if (peek() == '?') {
            get();
            int prev = 0;
            while (true) {
                const int c = get();
                if (c < 0) fail("unterminated XML declaration");
                if (prev == '?' && c == '>') break;
                prev = c;
            }
            skip_misc();
            expect('<');
        }
    } else {
        fail("expected '<'");
    }
    // Root start tag; '<' already consumed.
    if (!is_name_start(peek())) fail("expected root element name");
    root_name_ = read_name();
    XmlRow ignored;
    bool self_closing = false;
    read_attributes(ignored, self_closing);
    if (self_closing) done_ = true;  // empty document: zero rows
}

void RowXmlReader::refill() {
    in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buf_pos_ = 0;
    buf_end_ = static_cast<std::size_t>(in_.gcount());
}

int RowXmlReader::peek() {
    if (pushback_ >= 0) return pushback_;
    if (buf_pos_ == buf_end_) {
        refill();
        if (buf_end_ == 0) return -1;
    }
    return static_cast<unsigned char>(buffer_[buf_pos_]);
}

int RowXmlReader::get() {
    const int c = peek();
    if (c >= 0) {
        if (pushback_ >= 0) {
            pushback_ = -1;
        } else {
            ++buf_pos_;
        }
        ++offset_;
    }
    return c;
}

void RowXmlReader::unget(int c) {
    pushback_ = c;
    --offset_;
}

void RowXmlReader::fail(const std::string& message) const {
    throw XmlParseError(message, offset_);
}

void RowXmlReader::skip_whitespace() {
    while (is_space(peek())) get();
}

void RowXmlReader::skip_misc() {
    while (true) {
        skip_whitespace();
        if (peek() != '<') return;
        // Only consume it if this is a comment; otherwise leave the '<' alone.
        get();
        if (peek() != '!') {
            unget('<');
            return;
        }
        get();
        if (get() != '-' || get() != '-') fail("expected comment");
        int run = 0;
        while (true) {
            const int c = get();
            if (c < 0) fail("unterminated comment");
            if (c == '-') {
                ++run;
            } else if (c == '>' && run >= 2) {
                break;
            } else {
                run = 0;
            }
        }
    }
}

void RowXmlReader::expect(char c) {
    if (get() != c) fail(std::string("expected '") + c + "'");
}

std::string RowXmlReader::read_name() {
    std::string name;
    if (!is_name_start(peek())) fail("expected a name");
    while (is_name_char(peek())) name.push_back(static_cast<char>(get()));
    return name;
}

void RowXmlReader::decode_entity(std::string& out) {
    // '&' already consumed.
    std::string entity;
    while (true) {
        const int c = get();
        if (c < 0) fail("unterminated entity reference");
        if (c == ';') break;
        entity.push_back(static_cast<char>(c));
        if (entity.size() > 12) fail("entity reference too long");
    }
    if (entity == "amp") {
        out.push_back('&');
    } else if (entity == "lt") {
        out.push_back('<');
    } else if (entity == "gt") {
        out.push_back('>');
    } else if (entity == "quot") {
        out.push_back('"');
    } else if (entity == "apos") {
        out.push_back('\'');
    } else if (!entity.empty() && entity[0] == '#') {
        std::uint32_t cp = 0;
        bool ok = entity.size() > 1;
        if (entity.size() > 2 && (entity[1] == 'x' || entity[1] == 'X')) {
            for (std::size_t i = 2; i < entity.size(); ++i) {
                const char c = entity[i];
                if (c >= '0' && c <= '9') cp = cp * 16 + static_cast<std::uint32_t>(c - '0');
                else if (c >= 'a' && c <= 'f') cp = cp * 16 + static_cast<std::uint32_t>(c - 'a' + 10);
                else if (c >= 'A' && c <= 'F') cp = cp * 16 + static_cast<std::uint32_t>(c - 'A' + 10);
                else { ok = false; break; }
            }
        } else {
            for (std::size_t i = 1; i < entity.size(); ++i) {
                const char c = entity[i];
                if (c < '0' || c > '9') { ok = false; break; }
                cp = cp * 10 + static_cast<std::uint32_t>(c - '0');
            }
        }
        if (!ok || cp > 0x10FFFF) fail("bad character reference '&" + entity + ";'");
        append_utf8(out, cp);
    } else {
        fail("unknown entity '&" + entity + ";'");
    }
}

std::string RowXmlReader::read_attribute_value() {
    const int quote = get();
    if (quote != '"' && quote != '\'') fail("expected a quoted attribute value");
    std::string value;
    while (true) {
        const int c = get();
        if (c < 0) fail("unterminated attribute value");
        if (c == quote) break;
        if (c == '&') {
            decode_entity(value);
        } else if (c == '<') {
            fail("'<' inside attribute value");
        } else {
            value.push_back(static_cast<char>(c));
        }
    }
    return value;
}

void RowXmlReader::read_attributes(XmlRow& row, bool& self_closing) {
    self_closing = false;
    while (true) {
        const bool had_space = is_space(peek());
        skip_whitespace();
        const int c = peek();
        if (c == '>') {
            get();
            return;
        }
        if (c == '/') {
            get();
            expect('>');
            self_closing = true;
            return;
        }
        if (c < 0) fail("unterminated start tag");
        if (!had_space) fail("expected whitespace before attribute");
        std::string name = read_name();
        skip_whitespace();
        expect('=');
        skip_whitespace();
        row.attrs.emplace_back(std::move(name), read_attribute_value());
    }
}

bool RowXmlReader::next(XmlRow& row) {
    row.name.clear();
    row.attrs.clear();
    if (done_) return false;

    skip_misc();
    expect('<');
    if (peek() == '/') {
        get();
        const std::string name = read_name();
        if (name != root_name_) fail("close tag </" + name + "> does not match root <" + root_name_ + ">");
        skip_whitespace();
        expect('>');
        skip_misc();
        if (peek() >= 0) fail("content after the root close tag");
        done_ = true;
        return false;
    }

    row.name = read_name();
    bool self_closing = false;
    read_attributes(row, self_closing);
    if (!self_closing) {
        // Accept the <row ...></row> spelling; nothing may sit between.
        skip_misc();
        expect('<');
        expect('/');
        const std::string name = read_name();
        if (name != row.name) fail("close tag </" + name + "> does not match <" + row.name + ">");
        skip_whitespace();
        expect('>');
    }
    return true;
}

}  // namespace qah
