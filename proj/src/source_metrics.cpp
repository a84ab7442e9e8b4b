#include "inquest/source_metrics.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>
#include <vector>

#include "inquest/csv.hpp"

namespace inquest::source {

namespace fs = std::filesystem;

namespace {

bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) {
    return c >= '0' && c <= '9';
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    TokenStream run() {
        while (pos_ < text_.size()) {
            const unsigned char c = static_cast<unsigned char>(text_[pos_]);
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
            } else if (starts_with("//")) {
                skip_line_comment();
            } else if (starts_with("/*")) {
                skip_block_comment();
            } else if (starts_with("\"\"\"")) {
                text_block();
            } else if (c == '"' || c == '\'') {
                quoted(static_cast<char>(c));
            } else if (is_digit(c) || (c == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
                number();
            } else if (is_ident_start(c)) {
                identifier();
            } else if (starts_with("&&")) {
                emit(TokenKind::AndAnd, "&&", 2);
            } else if (starts_with("||")) {
                emit(TokenKind::OrOr, "||", 2);
            } else {
                switch (c) {
                    case '{': emit(TokenKind::LBrace, "{", 1); break;
                    case '}': emit(TokenKind::RBrace, "}", 1); break;
                    case '(': emit(TokenKind::LParen, "(", 1); break;
                    case ')': emit(TokenKind::RParen, ")", 1); break;
                    case '?': emit(TokenKind::Question, "?", 1); break;
                    default: emit(TokenKind::Punct, std::string(1, static_cast<char>(c)), 1);
                }
            }
        }
        out_.line_count = line_;
        if (!text_.empty() && text_.back() == '\n') {
            out_.line_count = line_ - 1;
        }
        out_.code_lines.assign(code_lines_.begin(), code_lines_.end());
        return std::move(out_);
    }

private:
    bool starts_with(std::string_view s) const {
        return text_.substr(pos_, s.size()) == s;
    }

    void mark(std::uint32_t from, std::uint32_t to) {
        for (auto l = from; l <= to; ++l) {
            code_lines_.insert(l);
        }
    }

    void emit(TokenKind kind, std::string text, std::size_t width) {
        mark(line_, line_);
        out_.tokens.push_back({kind, std::move(text), line_});
        pos_ += width;
    }

    void skip_line_comment() {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
            ++pos_;
        }
    }

    void skip_block_comment() {
        const auto start = line_;
        pos_ += 2;
        while (pos_ < text_.size()) {
            if (starts_with("*/")) {
                pos_ += 2;
                return;
            }
            if (text_[pos_] == '\n') {
                ++line_;
            }
            ++pos_;
        }
        throw ParseError("unterminated block comment starting at line " + std::to_string(start));
    }

    void text_block() {
        const auto start = line_;
        pos_ += 3;
        while (pos_ < text_.size()) {
            if (text_[pos_] == '\\') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
                    ++line_;
                }
                pos_ += 2;
                continue;
            }
            if (starts_with("\"\"\"")) {
                pos_ += 3;
                mark(start, line_);
                out_.tokens.push_back({TokenKind::Literal, "\"\"", start});
                return;
            }
            if (text_[pos_] == '\n') {
                ++line_;
            }
            ++pos_;
        }
        throw ParseError("unterminated text block starting at line " + std::to_string(start));
    }

    void quoted(char quote) {
        const auto start = line_;
        ++pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\\') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
                    ++line_;  // line splice
                }
                pos_ += 2;
                continue;
            }
            if (c == '\n') {
                break;
            }
            ++pos_;
            if (c == quote) {
                mark(start, line_);
                out_.tokens.push_back({TokenKind::Literal, std::string(2, quote), start});
                return;
            }
        }
        throw ParseError(std::string("unterminated ") + (quote == '"' ? "string" : "character") +
                         " literal at line " + std::to_string(start));
    }

    void raw_string() {
        // pos_ is on the opening quote of R"delim( ... )delim"
        const auto start = line_;
        const auto open = text_.find('(', pos_);
        if (open == std::string_view::npos) {
            throw ParseError("malformed raw string literal at line " + std::to_string(start));
        }
        const std::string closing = ")" + std::string(text_.substr(pos_ + 1, open - pos_ - 1)) + "\"";
        const auto close = text_.find(closing, open);
        if (close == std::string_view::npos) {
            throw ParseError("unterminated raw string literal at line " + std::to_string(start));
        }
        const auto end = close + closing.size();
        line_ += static_cast<std::uint32_t>(std::count(text_.begin() + pos_, text_.begin() + end, '\n'));
        pos_ = end;
        mark(start, line_);
        out_.tokens.push_back({TokenKind::Literal, "\"\"", start});
    }

    void number() {
        mark(line_, line_);
        while (pos_ < text_.size()) {
            const unsigned char c = text_[pos_];
            if (is_ident_char(c) || c == '.') {
                ++pos_;
            } else if (c == '\'' && pos_ + 1 < text_.size() && is_ident_char(text_[pos_ + 1])) {
                pos_ += 2;  // digit separator
            } else if ((c == '+' || c == '-') && pos_ > 0 &&
                       (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E' || text_[pos_ - 1] == 'p' ||
                        text_[pos_ - 1] == 'P')) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    void identifier() {
        const auto begin = pos_;
        while (pos_ < text_.size() && is_ident_char(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        const std::string_view word = text_.substr(begin, pos_ - begin);
        if (pos_ < text_.size() && text_[pos_] == '"' &&
            (word == "R" || word == "LR" || word == "uR" || word == "UR" || word == "u8R")) {
            raw_string();
            return;
        }
        if (pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\'') &&
            (word == "L" || word == "u" || word == "U" || word == "u8")) {
            return;  // encoding prefix; the literal follows
        }
        mark(line_, line_);
        out_.tokens.push_back({TokenKind::Identifier, std::string(word), line_});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::set<std::uint32_t> code_lines_;
    TokenStream out_;
};

const std::unordered_set<std::string_view> kDecisionKeywords{"if", "for", "while", "case", "catch"};

const std::unordered_set<std::string_view> kNotMethodNames{
    "if",     "for",   "while", "switch", "catch",  "synchronized", "return", "sizeof",
    "typeof", "using", "lock",  "fixed",  "foreach", "try",         "do",     "else"};

const std::unordered_set<std::string_view> kTypeKeywords{"class", "struct", "interface", "enum", "union",
                                                          "record"};

const std::unordered_set<std::string_view> kTrailerPuncts{",", ".", ":", "<", ">", "*", "&", "-", "[", "]"};

enum class Scope { Container, Type, Method, Block };

struct Frame {
    Scope scope;
    bool in_method;
    std::uint32_t open_line;
};

bool is_punct(const Token& t, std::string_view text) {
    return t.kind == TokenKind::Punct && t.text == text;
}

/// Index of the `(` matching the `)` at `close`, or npos.
std::size_t matching_open_paren(const std::vector<Token>& tokens, std::size_t close) {
    int depth = 0;
    for (std::size_t i = close + 1; i-- > 0;) {
        if (tokens[i].kind == TokenKind::RParen) {
            ++depth;
        } else if (tokens[i].kind == TokenKind::LParen) {
            if (--depth == 0) {
                return i;
            }
        } else if (tokens[i].kind == TokenKind::LBrace || tokens[i].kind == TokenKind::RBrace) {
            return std::string_view::npos;
        }
    }
    return std::string_view::npos;
}

/// If the `{` at `brace` opens a function body, returns the function's name.
std::optional<std::string> method_name(const std::vector<Token>& tokens, std::size_t brace) {
    std::size_t i = brace;
    while (i > 0) {
        const Token& t = tokens[i - 1];
        if (t.kind == TokenKind::RParen) {
            break;
        }
        if (t.kind == TokenKind::Identifier || (t.kind == TokenKind::Punct && kTrailerPuncts.contains(t.text))) {
            --i;
            continue;
        }
        return std::nullopt;
    }
    if (i == 0) {
        return std::nullopt;
    }
    // tokens[i - 1] is ')'; walk the trailer-free form first: `name ( ... ) trailers {`.
    // For constructor initializer lists the first ')' found belongs to the last member
    // initializer; its identifier still names a call, which is good enough for a label.
    const std::size_t open = matching_open_paren(tokens, i - 1);
    if (open == std::string_view::npos || open == 0) {
        return std::nullopt;
    }
    const Token& name = tokens[open - 1];
    if (name.kind != TokenKind::Identifier || kNotMethodNames.contains(name.text)) {
        return std::nullopt;
    }
    if (open >= 2 && tokens[open - 2].kind == TokenKind::Identifier && tokens[open - 2].text == "new") {
        return std::nullopt;
    }
    return name.text;
}

/// Classifies a non-method `{` from the tokens since the previous statement boundary.
Scope classify_brace(const std::vector<Token>& tokens, std::size_t brace) {
    for (std::size_t i = brace; i-- > 0;) {
        const Token& t = tokens[i];
        if (t.kind == TokenKind::LBrace || t.kind == TokenKind::RBrace || is_punct(t, ";") ||
            t.kind == TokenKind::RParen) {
            break;
        }
        if (t.kind == TokenKind::Identifier) {
            if (kTypeKeywords.contains(t.text)) {
                return Scope::Type;
            }
            if (t.text == "namespace" || t.text == "extern") {
                return Scope::Container;
            }
        }
    }
    return Scope::Block;
}

bool is_generic_wildcard(const std::vector<Token>& tokens, std::size_t i) {
    if (i == 0 || i + 1 >= tokens.size()) {
        return false;
    }
    const Token& prev = tokens[i - 1];
    const Token& next = tokens[i + 1];
    const bool opens = is_punct(prev, "<") || is_punct(prev, ",");
    const bool closes = is_punct(next, ">") || is_punct(next, ",") ||
                        (next.kind == TokenKind::Identifier && (next.text == "extends" || next.text == "super"));
    return opens && closes;
}

std::int64_t count_code_lines(const std::vector<std::uint32_t>& code_lines, std::uint32_t first,
                              std::uint32_t last) {
    auto lo = std::lower_bound(code_lines.begin(), code_lines.end(), first);
    auto hi = std::upper_bound(code_lines.begin(), code_lines.end(), last);
    return hi - lo;
}

void summarize(SourceUnitMetrics& unit) {
    unit.method_count = static_cast<std::int64_t>(unit.methods.size());
    if (unit.methods.empty()) {
        unit.mean_method_length = 0.0;
        unit.cyclomatic_max = 1;
        unit.cyclomatic_mean = 1.0;
        return;
    }
    std::int64_t total_length = 0;
    std::int64_t total_cc = 0;
    std::int64_t max_cc = 1;
    for (const auto& m : unit.methods) {
        total_length += m.length;
        total_cc += m.cyclomatic;
        max_cc = std::max(max_cc, m.cyclomatic);
    }
    const auto n = static_cast<double>(unit.methods.size());
    unit.mean_method_length = static_cast<double>(total_length) / n;
    unit.cyclomatic_max = max_cc;
    unit.cyclomatic_mean = static_cast<double>(total_cc) / n;
}

}  // namespace

TokenStream tokenize(std::string_view text) {
    return Lexer(text).run();
}

SourceUnitMetrics extract_metrics(std::string_view text, std::string unit_name) {
    const TokenStream stream = tokenize(text);
    const auto& tokens = stream.tokens;

    SourceUnitMetrics unit;
    unit.unit_name = std::move(unit_name);
    unit.loc = static_cast<std::int64_t>(stream.code_lines.size());

    std::vector<Frame> stack{{Scope::Container, false, 0}};
    MethodMetrics current;

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        const bool in_method = stack.back().in_method;
        switch (t.kind) {
            case TokenKind::LBrace: {
                if (in_method) {
                    stack.push_back({Scope::Block, true, t.line});
                    break;
                }
                const Scope enclosing = stack.back().scope;
                if (enclosing == Scope::Type || enclosing == Scope::Container) {
                    if (auto name = method_name(tokens, i)) {
                        current = MethodMetrics{*name, t.line, t.line, 0, 1};
                        stack.push_back({Scope::Method, true, t.line});
                        break;
                    }
                    const Scope kind = classify_brace(tokens, i);
                    stack.push_back({kind, false, t.line});
                    break;
                }
                stack.push_back({classify_brace(tokens, i) == Scope::Type ? Scope::Type : Scope::Block, false,
                                 t.line});
                break;
            }
            case TokenKind::RBrace: {
                if (stack.size() == 1) {
                    throw ParseError("unbalanced braces: unexpected '}' at line " + std::to_string(t.line));
                }
                if (stack.back().scope == Scope::Method) {
                    current.last_line = t.line;
                    current.length = count_code_lines(stream.code_lines, current.first_line, current.last_line);
                    unit.methods.push_back(std::move(current));
                    current = MethodMetrics{};
                }
                stack.pop_back();
                break;
            }
            case TokenKind::Identifier:
                if (in_method && kDecisionKeywords.contains(t.text)) {
                    ++current.cyclomatic;
                }
                break;
            case TokenKind::AndAnd:
            case TokenKind::OrOr:
                if (in_method) {
                    ++current.cyclomatic;
                }
                break;
            case TokenKind::Question:
                if (in_method && !is_generic_wildcard(tokens, i)) {
                    ++current.cyclomatic;
                }
                break;
            default:
                break;
        }
    }
    if (stack.size() > 1) {
        throw ParseError("unbalanced braces: " + std::to_string(stack.size() - 1) +
                         " unclosed '{' (innermost opened at line " + std::to_string(stack.back().open_line) + ")");
    }
    summarize(unit);
    return unit;
}

SourceUnitMetrics extract_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestionError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return extract_metrics(buffer.str(), path.stem().string());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

SourceUnitMetrics merge_units(std::string unit_name, const std::vector<SourceUnitMetrics>& parts) {
    SourceUnitMetrics unit;
    unit.unit_name = std::move(unit_name);
    for (const auto& p : parts) {
        unit.loc += p.loc;
        unit.methods.insert(unit.methods.end(), p.methods.begin(), p.methods.end());
    }
    summarize(unit);
    return unit;
}

bool is_source_file(const fs::path& path) {
    static const std::unordered_set<std::string> extensions{
        ".java", ".c", ".cc", ".cpp", ".cxx", ".c++", ".h", ".hh", ".hpp", ".hxx",
        ".cs",   ".js", ".ts", ".go", ".kt", ".scala", ".swift", ".m", ".mm", ".rs"};
    return extensions.contains(path.extension().string());
}

std::vector<SourceUnitMetrics> extract_tree(const fs::path& root, const TreeOptions& options) {
    if (!fs::is_directory(root)) {
        throw IngestionError("source directory not found: " + root.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && is_source_file(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<SourceUnitMetrics> per_file(files.size());
    std::vector<std::exception_ptr> failures(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            try {
                per_file[i] = extract_file(files[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(files.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    std::map<std::string, std::vector<SourceUnitMetrics>> grouped;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const std::string rel = fs::relative(files[i], root).generic_string();
        auto it = options.unit_mapping.find(rel);
        const std::string unit = it != options.unit_mapping.end() ? it->second : files[i].stem().string();
        grouped[unit].push_back(std::move(per_file[i]));
    }
    std::vector<SourceUnitMetrics> units;
    for (auto& [name, parts] : grouped) {
        if (parts.size() == 1) {
            parts.front().unit_name = name;
            units.push_back(std::move(parts.front()));
        } else {
            units.push_back(merge_units(name, parts));
        }
    }
    return units;
}

std::map<std::string, std::string> read_unit_mapping(const fs::path& path) {
    const auto table = csv::read_file(path);
    const auto c_file = table.column("file_path");
    const auto c_unit = table.column("unit_id");
    std::map<std::string, std::string> mapping;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::string file = fs::path(table.rows[i][c_file]).lexically_normal().generic_string();
        const std::string& unit = table.rows[i][c_unit];
        if (unit.empty()) {
            throw ParseError(table.source + ": row " + std::to_string(table.line_numbers[i]) +
                             ", column unit_id: empty unit id");
        }
        if (!mapping.emplace(file, unit).second) {
            throw ParseError(table.source + ": row " + std::to_string(table.line_numbers[i]) +
                             ", column file_path: file mapped twice");
        }
    }
    return mapping;
}

ProductMetricsRecord to_product_record(const SourceUnitMetrics& unit, CyclomaticAggregation aggregation) {
    ProductMetricsRecord r;
    r.unit_id = unit.unit_name;
    r.class_length_loc = unit.loc;
    r.mean_method_length = unit.mean_method_length;
    r.cyclomatic = aggregation == CyclomaticAggregation::Max ? static_cast<double>(unit.cyclomatic_max)
                                                             : unit.cyclomatic_mean;
    return r;
}

std::string product_csv(const std::vector<ProductMetricsRecord>& records) {
    std::string out = "unit_id,class_length_loc,mean_method_length,cyclomatic,statement_loc,waste_per_line\n";
    for (const auto& r : records) {
        out += csv::join_row({r.unit_id, std::to_string(r.class_length_loc), csv::format_number(r.mean_method_length),
                              csv::format_number(r.cyclomatic),
                              r.statement_loc ? std::to_string(*r.statement_loc) : std::string(),
                              r.waste_per_line ? csv::format_number(*r.waste_per_line) : std::string()}) +
               "\n";
    }
    return out;
}

}  // namespace inquest::source
