#include <vector>

#include "facadex/error.hpp"
#include "facadex/log.hpp"
#include "internal.hpp"

namespace facadex::triplify {
namespace {

// RFC 4180 record reader. Quoted fields may contain the delimiter, doubled
// quotes, and line breaks; CRLF and LF both end a record. Blank lines are
// skipped.
class CsvReader {
 public:
  CsvReader(std::string_view text, char delimiter) : text_(text), delimiter_(delimiter) {}

  bool next(std::vector<std::string>& record) {
    record.clear();
    while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
      ++line_;
    }
    if (pos_ >= text_.size()) return false;
    std::string field;
    bool quoted = false;
    bool wasQuoted = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (quoted) {
        if (c == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            field += '"';
            pos_ += 2;
            continue;
          }
          quoted = false;
          ++pos_;
          continue;
        }
        if (c == '\n') ++line_;
        field += c;
        ++pos_;
        continue;
      }
      if (c == '"' && field.empty() && !wasQuoted) {
        quoted = true;
        wasQuoted = true;
        ++pos_;
      } else if (c == delimiter_) {
        record.push_back(std::move(field));
        field.clear();
        wasQuoted = false;
        ++pos_;
      } else if (c == '\r' || c == '\n') {
        if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ++pos_;
        ++pos_;
        ++line_;
        break;
      } else {
        field += c;
        ++pos_;
      }
    }
    if (quoted) {
      throw Error(ErrorKind::Format, "CSV: unterminated quoted field near line " + std::to_string(line_));
    }
    record.push_back(std::move(field));
    return true;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  char delimiter_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

char delimiterOf(const config::FacadeOptions& options) {
  auto d = options.get(config::opt::kCsvDelimiter);
  if (!d) return ',';
  if (*d == "\\t") return '\t';
  if (d->size() != 1) throw Error(ErrorKind::Config, "csv.delimiter must be a single character");
  return (*d)[0];
}

// Duplicate header names get the column number appended so slot keys stay
// unique within a row.
std::vector<std::string> uniqueHeaders(std::vector<std::string> headers) {
  for (std::size_t i = 0; i < headers.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (headers[j] == headers[i]) {
        headers[i] += "_" + std::to_string(i + 1);
        break;
      }
    }
  }
  return headers;
}

class CsvRows {
 public:
  CsvRows(std::string_view text, const config::FacadeOptions& options)
      : reader_(text, delimiterOf(options)),
        useHeaders_(options.getBool(config::opt::kCsvHeaders, false)) {
    if (useHeaders_) {
      std::vector<std::string> header;
      if (reader_.next(header)) headers_ = uniqueHeaders(std::move(header));
    }
  }

  bool next(std::vector<std::string>& row) { return reader_.next(row); }

  void emitRow(FacadeBuilder& out, const rdf::Term& parent, std::int64_t index,
               const std::vector<std::string>& cells) {
    auto row = out.container(parent, SlotKey::index(index));
    if (useHeaders_ && cells.size() != headers_.size()) {
      log::warn("CSV row " + std::to_string(index) + " has " + std::to_string(cells.size()) +
                " cells, header has " + std::to_string(headers_.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      auto literal = rdf::Term::literal(cells[j]);
      if (useHeaders_ && j < headers_.size()) {
        out.value(row, SlotKey::key(headers_[j]), std::move(literal));
      } else {
        out.value(row, SlotKey::next(), std::move(literal));
      }
    }
  }

 private:
  CsvReader reader_;
  bool useHeaders_;
  std::vector<std::string> headers_;
};

}  // namespace

void triplifyCsv(std::string_view text, const config::FacadeOptions& options, FacadeBuilder& out) {
  CsvRows rows(text, options);
  auto root = out.root();
  std::vector<std::string> cells;
  std::int64_t index = 0;
  while (rows.next(cells)) rows.emitRow(out, root, ++index, cells);
}

namespace detail {

void sliceCsv(std::string_view text, const config::FacadeOptions& options,
              const BuilderFactory& makeBuilder, const UnitSink& onUnit) {
  CsvRows rows(text, options);
  std::vector<std::string> cells;
  std::int64_t index = 0;
  while (rows.next(cells)) {
    auto builder = makeBuilder();
    auto root = builder.root();
    rows.emitRow(builder, root, ++index, cells);
    onUnit(std::move(builder).finish());
  }
}

}  // namespace detail
}  // namespace facadex::triplify
