#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "inquest/defect_model.hpp"

namespace inquest::source {

enum class TokenKind {
    Identifier,
    LBrace,
    RBrace,
    LParen,
    RParen,
    AndAnd,
    OrOr,
    Question,
    Literal,  // string or character literal, contents dropped
    Punct,    // any other single operator character
};

struct Token {
    TokenKind kind;
    std::string text;
    std::uint32_t line;

    bool operator==(const Token&) const = default;
};

struct TokenStream {
    std::vector<Token> tokens;
    /// Sorted 1-based numbers of lines holding at least one non-comment character.
    std::vector<std::uint32_t> code_lines;
    std::uint32_t line_count = 0;
};

/// Lexes brace-delimited source text. Comments vanish, literal contents are replaced by
/// an empty literal token, numbers are dropped. Throws ParseError on an unterminated block
/// comment or literal, naming the line where it starts.
TokenStream tokenize(std::string_view text);

struct MethodMetrics {
    std::string name;
    std::uint32_t first_line = 0;
    std::uint32_t last_line = 0;
    /// Code lines inside the method's brace span (inclusive of both brace lines).
    std::int64_t length = 0;
    std::int64_t cyclomatic = 1;
};

struct SourceUnitMetrics {
    std::string unit_name;
    std::int64_t loc = 0;
    std::int64_t method_count = 0;
    double mean_method_length = 0.0;
    std::int64_t cyclomatic_max = 1;
    double cyclomatic_mean = 1.0;
    std::vector<MethodMetrics> methods;
};

/// Computes size and McCabe metrics for one file's text.
///
/// A method is an identifier, a parenthesised list and a `{` opened directly inside a type
/// body (class, struct, interface, enum, record, union) or at namespace/file scope. Its
/// complexity is 1 plus the number of `if`, `for`, `while`, `case`, `catch`, `&&`, `||`
/// and `?` tokens inside its braces. Units without methods report complexity 1.
/// Throws ParseError on unbalanced braces.
SourceUnitMetrics extract_metrics(std::string_view text, std::string unit_name);

SourceUnitMetrics extract_file(const std::filesystem::path& path);

/// Folds several files into one unit: loc adds up, method lists concatenate.
SourceUnitMetrics merge_units(std::string unit_name, const std::vector<SourceUnitMetrics>& parts);

enum class CyclomaticAggregation { Max, Mean };

struct TreeOptions {
    CyclomaticAggregation aggregation = CyclomaticAggregation::Max;
    /// Relative path (generic form, relative to the root) -> unit id. Unmapped files use
    /// their stem.
    std::map<std::string, std::string> unit_mapping;
    unsigned jobs = 1;
};

/// Recognised source extensions (.java, .c, .cc, .cpp, .h, .hpp, .cs, .js, .ts, ...).
bool is_source_file(const std::filesystem::path& path);

/// Extracts every source file under `root` (recursively) and groups them into units.
/// The result is sorted by unit id and is identical for every `jobs` value.
std::vector<SourceUnitMetrics> extract_tree(const std::filesystem::path& root, const TreeOptions& options);

/// Reads a `file_path,unit_id` mapping CSV.
std::map<std::string, std::string> read_unit_mapping(const std::filesystem::path& path);

ProductMetricsRecord to_product_record(const SourceUnitMetrics& unit, CyclomaticAggregation aggregation);

/// Renders records in the dataset's `run_<order>.product.csv` layout.
std::string product_csv(const std::vector<ProductMetricsRecord>& records);

}  // namespace inquest::source
