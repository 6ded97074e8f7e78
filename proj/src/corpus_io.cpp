#include "srlcomb/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "srlcomb/errors.hpp"

namespace srlcomb {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string_view> fields;
};

using Block = std::vector<Line>;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Splits text into blank-line separated blocks of non-empty lines.
std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> blocks;
  Block current;
  int number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto fields = split_fields(line);
    if (fields.empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back({number, std::move(fields)});
    }
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  return blocks;
}

bool is_label_char(char c) { return c != '(' && c != ')' && c != '*'; }

struct BracketTag {
  std::vector<std::string> opens;
  std::vector<std::string> closes;  // closer labels; empty string for a bare ")"
};

// Grammar: ("(" LABEL)* "*" (LABEL? ")")*
BracketTag parse_bracket_tag(std::string_view tag, int line, int column) {
  BracketTag out;
  std::size_t i = 0;
  while (i < tag.size() && tag[i] == '(') {
    std::size_t j = ++i;
    while (j < tag.size() && is_label_char(tag[j])) ++j;
    if (j == i) throw ParseError("empty label in bracket tag '" + std::string(tag) + "'", line, column);
    out.opens.emplace_back(tag.substr(i, j - i));
    i = j;
  }
  if (i >= tag.size() || tag[i] != '*')
    throw ParseError("malformed bracket tag '" + std::string(tag) + "'", line, column);
  ++i;
  while (i < tag.size()) {
    std::size_t j = i;
    while (j < tag.size() && is_label_char(tag[j])) ++j;
    if (j >= tag.size() || tag[j] != ')')
      throw ParseError("malformed bracket tag '" + std::string(tag) + "'", line, column);
    out.closes.emplace_back(tag.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

void check_bio(std::string_view tag, std::string_view previous, int line, int column,
               const char* what) {
  if (tag == "O") return;
  if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-')
    throw ParseError(std::string("malformed ") + what + " tag '" + std::string(tag) + "'", line, column);
  if (tag[0] == 'I') {
    bool continues = previous.size() >= 3 && previous.substr(2) == tag.substr(2);
    if (!continues)
      throw ParseError(std::string(what) + " tag '" + std::string(tag) + "' does not continue a chunk",
                       line, column);
  }
}

int checked_int(std::string_view text, int line, int column) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("expected integer, got '" + std::string(text) + "'", line, column);
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Props

PropsDocument parse_props(std::string_view text) {
  PropsDocument doc;
  for (const Block& block : split_blocks(text)) {
    const std::size_t ncols = block.front().fields.size();
    PropsSentence sentence;
    sentence.n_tokens = static_cast<int>(block.size());
    for (std::size_t t = 0; t < block.size(); ++t) {
      const Line& line = block[t];
      if (line.fields.size() != ncols)
        throw ParseError("expected " + std::to_string(ncols) + " columns, found " +
                             std::to_string(line.fields.size()),
                         line.number);
      if (line.fields[0] != "-")
        sentence.propositions.push_back({Predicate{static_cast<int>(t), std::string(line.fields[0])}, {}});
    }
    if (ncols - 1 != sentence.propositions.size())
      throw ParseError(std::to_string(sentence.propositions.size()) + " predicates but " +
                           std::to_string(ncols - 1) + " argument columns",
                       block.front().number);

    for (std::size_t k = 0; k < sentence.propositions.size(); ++k) {
      const int column = static_cast<int>(k) + 2;
      struct Open {
        std::string label;
        int start;
        int line;
      };
      std::vector<Open> stack;
      auto& args = sentence.propositions[k].arguments;
      for (std::size_t t = 0; t < block.size(); ++t) {
        const Line& line = block[t];
        BracketTag tag = parse_bracket_tag(line.fields[k + 1], line.number, column);
        for (auto& label : tag.opens) stack.push_back({std::move(label), static_cast<int>(t), line.number});
        for (const auto& closer : tag.closes) {
          if (stack.empty()) throw ParseError("closing bracket without matching open", line.number, column);
          Open open = std::move(stack.back());
          stack.pop_back();
          if (!closer.empty() && closer != open.label)
            throw ParseError("closing label '" + closer + "' does not match '" + open.label + "'",
                             line.number, column);
          auto label = RoleLabel::try_parse(open.label);
          if (!label) throw ParseError("invalid role label '" + open.label + "'", open.line, column);
          args.push_back({static_cast<int>(k), *label, Span{open.start, static_cast<int>(t)}});
        }
      }
      if (!stack.empty())
        throw ParseError("unclosed bracket '(" + stack.back().label + "'", stack.back().line, column);
      std::sort(args.begin(), args.end(), canonical_less);
    }
    doc.sentences.push_back(std::move(sentence));
  }
  return doc;
}

std::string emit_props(const PropsDocument& doc) {
  std::string out;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const PropsSentence& sentence = doc.sentences[s];
    const int n = sentence.n_tokens;
    std::vector<std::string> lemma(n, "-");
    std::vector<std::vector<std::string>> columns;
    int last_position = -1;
    for (const Proposition& prop : sentence.propositions) {
      const int position = prop.predicate.position;
      if (position < 0 || position >= n || position <= last_position)
        throw SerializationError("sentence " + std::to_string(s) + ": bad predicate position " +
                                 std::to_string(position));
      last_position = position;
      lemma[position] = prop.predicate.lemma;

      std::vector<Argument> args = prop.arguments;
      std::sort(args.begin(), args.end(), canonical_less);
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].span.valid() || args[i].span.end >= n)
          throw SerializationError("sentence " + std::to_string(s) + ": span outside sentence");
        for (std::size_t j = i + 1; j < args.size(); ++j)
          if (span_relation(args[i].span, args[j].span) == SpanRelation::Crossing)
            throw SerializationError("sentence " + std::to_string(s) + ", predicate " +
                                     std::to_string(position) + ": crossing arguments " +
                                     args[i].label.text() + " and " + args[j].label.text());
      }
      std::vector<std::string> opens(n);
      std::vector<int> closes(n, 0);
      for (const Argument& arg : args) {
        opens[arg.span.start] += "(" + arg.label.text();
        ++closes[arg.span.end];
      }
      std::vector<std::string> column(n);
      for (int t = 0; t < n; ++t) column[t] = opens[t] + "*" + std::string(closes[t], ')');
      columns.push_back(std::move(column));
    }
    for (int t = 0; t < n; ++t) {
      out += lemma[t];
      for (const auto& column : columns) {
        out += ' ';
        out += column[t];
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Syntax

std::vector<std::string> parse_column(const ParseNode& root, int n_tokens) {
  std::vector<std::string> opens(n_tokens);
  std::vector<int> closes(n_tokens, 0);
  auto visit = [&](auto&& self, const ParseNode& node) -> void {
    if (node.is_preterminal()) return;
    opens.at(node.span.start) += "(" + node.label;
    ++closes.at(node.span.end);
    for (const auto& child : node.children) self(self, child);
  };
  visit(visit, root);
  std::vector<std::string> out(n_tokens);
  for (int t = 0; t < n_tokens; ++t) out[t] = opens[t] + "*" + std::string(closes[t], ')');
  return out;
}

std::vector<Sentence> parse_syntax(std::string_view text) {
  std::vector<Sentence> out;
  for (const Block& block : split_blocks(text)) {
    const std::size_t ncols = block.front().fields.size();
    if (ncols != 5 && ncols != 6)
      throw ParseError("syntax lines need 5 or 6 columns, found " + std::to_string(ncols),
                       block.front().number);
    Sentence sentence;
    sentence.id = static_cast<int>(out.size());
    const bool has_parse = ncols == 6;

    std::vector<std::pair<std::string, int>> clause_stack;
    std::vector<ParseNode> parse_stack;
    std::vector<int> parse_open_lines;
    std::optional<ParseNode> root;

    for (std::size_t t = 0; t < block.size(); ++t) {
      const Line& line = block[t];
      if (line.fields.size() != ncols)
        throw ParseError("expected " + std::to_string(ncols) + " columns, found " +
                             std::to_string(line.fields.size()),
                         line.number);
      Token token;
      token.index = static_cast<int>(t);
      token.form = line.fields[0];
      token.pos = line.fields[1];
      token.chunk = line.fields[2];
      token.clause = line.fields[3];
      token.ne = line.fields[4];
      check_bio(token.chunk, t > 0 ? std::string_view(sentence.tokens.back().chunk) : "O", line.number,
                3, "chunk");
      check_bio(token.ne, t > 0 ? std::string_view(sentence.tokens.back().ne) : "O", line.number, 5,
                "named-entity");

      BracketTag clause = parse_bracket_tag(token.clause, line.number, 4);
      for (auto& label : clause.opens) clause_stack.emplace_back(std::move(label), line.number);
      for (const auto& closer : clause.closes) {
        if (clause_stack.empty()) throw ParseError("clause closes without open", line.number, 4);
        if (!closer.empty() && closer != clause_stack.back().first)
          throw ParseError("clause closer '" + closer + "' does not match", line.number, 4);
        clause_stack.pop_back();
      }

      if (has_parse) {
        BracketTag tag = parse_bracket_tag(line.fields[5], line.number, 6);
        for (auto& label : tag.opens) {
          if (parse_stack.empty() && root)
            throw ParseError("parse has more than one root", line.number, 6);
          parse_stack.push_back(ParseNode{std::move(label), Span{token.index, token.index}, {}});
          parse_open_lines.push_back(line.number);
        }
        if (parse_stack.empty()) throw ParseError("token outside the parse tree", line.number, 6);
        parse_stack.back().children.push_back(ParseNode{token.pos, Span{token.index, token.index}, {}});
        for (const auto& closer : tag.closes) {
          if (parse_stack.empty()) throw ParseError("parse closes without open", line.number, 6);
          ParseNode node = std::move(parse_stack.back());
          parse_stack.pop_back();
          parse_open_lines.pop_back();
          if (!closer.empty() && closer != node.label)
            throw ParseError("parse closer '" + closer + "' does not match", line.number, 6);
          node.span.end = token.index;
          if (parse_stack.empty())
            root = std::move(node);
          else
            parse_stack.back().children.push_back(std::move(node));
        }
      }
      sentence.tokens.push_back(std::move(token));
    }
    if (!clause_stack.empty()) throw ParseError("unclosed clause bracket", clause_stack.back().second, 4);
    if (has_parse) {
      if (!parse_stack.empty()) throw ParseError("unclosed parse bracket", parse_open_lines.back(), 6);
      if (!root || root->span.start != 0 || root->span.end != sentence.size() - 1)
        throw ParseError("parse tree does not cover the sentence", block.front().number, 6);
      sentence.parse = std::move(root);
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

std::string emit_syntax(std::span<const Sentence> sentences) {
  std::string out;
  for (const Sentence& sentence : sentences) {
    std::vector<std::string> parse;
    if (sentence.parse) parse = parse_column(*sentence.parse, sentence.size());
    for (const Token& token : sentence.tokens) {
      out += token.form + ' ' + token.pos + ' ' + token.chunk + ' ' + token.clause + ' ' + token.ne;
      if (sentence.parse) out += ' ' + parse[token.index];
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Score sidecar

ScoreTable parse_scores(std::string_view text) {
  ScoreTable table;
  int number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++number;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 6)
      throw ParseError("expected 6 fields, found " + std::to_string(fields.size()), number);
    ScoreKey key;
    key.sentence = checked_int(fields[0], number, 1);
    key.predicate = checked_int(fields[1], number, 2);
    if (!RoleLabel::try_parse(fields[2])) throw ParseError("invalid role label", number, 3);
    key.label = fields[2];
    key.span = {checked_int(fields[3], number, 4), checked_int(fields[4], number, 5)};
    if (key.sentence < 0 || key.predicate < 0 || !key.span.valid())
      throw ParseError("negative index or empty span", number);
    double score = 0.0;
    std::string_view value = fields[5];
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ParseError("bad score '" + std::string(value) + "'", number, 6);
    if (!table.emplace(key, score).second) throw ParseError("duplicate score key", number);
  }
  return table;
}

std::string emit_scores(const ScoreTable& table) {
  std::string out;
  for (const auto& [key, score] : table) {
    out += std::to_string(key.sentence) + ' ' + std::to_string(key.predicate) + ' ' + key.label + ' ' +
           std::to_string(key.span.start) + ' ' + std::to_string(key.span.end) + ' ' +
           format_double(score) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

void attach_predicates(std::vector<Sentence>& sentences, const PropsDocument& props) {
  if (sentences.size() != props.sentences.size())
    throw AlignmentError("syntax has " + std::to_string(sentences.size()) + " sentences, props has " +
                             std::to_string(props.sentences.size()),
                         static_cast<int>(std::min(sentences.size(), props.sentences.size())));
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].size() != props.sentences[i].n_tokens)
      throw AlignmentError("token count differs between syntax and props", static_cast<int>(i));
    sentences[i].predicates.clear();
    for (const auto& prop : props.sentences[i].propositions) sentences[i].predicates.push_back(prop.predicate);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace srlcomb
