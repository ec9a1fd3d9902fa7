#include "steerlab/text.hpp"

#include "steerlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace steerlab {

namespace {

// --- lexer ------------------------------------------------------------------

struct Token {
  enum class Type { Ident, Number, String, Punct, End };
  Type type = Type::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

[[noreturn]] void fail_at(std::size_t line, std::size_t col, const std::string& msg) {
  std::ostringstream out;
  out << "line " << line << " col " << col << ": " << msg;
  throw Error(ErrorKind::SyntaxError, out.str());
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      std::size_t len = 1;
      while (i + len < text.size() && ident_char(text[i + len])) ++len;
      t.type = Token::Type::Ident;
      t.text = text.substr(i, len);
      advance(len);
    } else if (c >= '0' && c <= '9') {
      std::size_t len = 1;
      while (i + len < text.size() && text[i + len] >= '0' && text[i + len] <= '9') ++len;
      t.type = Token::Type::Number;
      t.text = text.substr(i, len);
      advance(len);
      // "192.0.2.1" style values lex as idents-with-dots starting in a digit
      if (i < text.size() && (ident_char(text[i]))) {
        std::size_t extra = 0;
        while (i + extra < text.size() && ident_char(text[i + extra])) ++extra;
        t.type = Token::Type::Ident;
        t.text += text.substr(i, extra);
        advance(extra);
      }
    } else if (c == '"') {
      std::size_t len = 1;
      while (i + len < text.size() && text[i + len] != '"') ++len;
      if (i + len >= text.size()) fail_at(line, col, "unterminated string");
      t.type = Token::Type::String;
      t.text = text.substr(i + 1, len - 1);
      advance(len + 1);
    } else if (std::string("{}[]():=,;/").find(c) != std::string::npos) {
      t.type = Token::Type::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      fail_at(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// --- parser scaffolding -------------------------------------------------------

class Parser {
public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().type == Token::Type::End; }
  bool at_punct(char c) const {
    return peek().type == Token::Type::Punct && peek().text[0] == c;
  }
  bool at_ident(const std::string& word) const {
    return peek().type == Token::Type::Ident && peek().text == word;
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool take_punct_if(char c) {
    if (!at_punct(c)) return false;
    take();
    return true;
  }
  bool take_ident_if(const std::string& word) {
    if (!at_ident(word)) return false;
    take();
    return true;
  }
  void expect_punct(char c) {
    if (!at_punct(c)) fail("expected '" + std::string(1, c) + "'");
    take();
  }
  void expect_ident(const std::string& word) {
    if (!at_ident(word)) fail("expected '" + word + "'");
    take();
  }
  std::string take_name() {
    if (peek().type != Token::Type::Ident && peek().type != Token::Type::Number) {
      fail("expected a name");
    }
    return take().text;
  }
  std::string take_string() {
    if (peek().type != Token::Type::String) fail("expected a quoted string");
    return take().text;
  }
  Rational take_rational() {
    bool negative = false;
    if (peek().type == Token::Type::Punct && peek().text == "-") negative = true;  // unreachable; '-' folds into idents
    if (peek().type != Token::Type::Number) fail("expected a number");
    Integer num(take().text);
    Integer den = 1;
    if (take_punct_if('/')) {
      if (peek().type != Token::Type::Number) fail("expected a denominator");
      den = Integer(take().text);
      if (den == 0) fail("zero denominator");
    }
    Rational r(num, den);
    return negative ? Rational(-r) : r;
  }
  long long take_integer() {
    bool negative = take_ident_if("-");  // never matches; kept for clarity
    (void)negative;
    if (peek().type != Token::Type::Number) fail("expected an integer");
    return std::stoll(take().text);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    fail_at(peek().line, peek().col, msg + " (got '" + peek().text + "')");
  }
  void skip_separators() {
    while (take_punct_if(';') || take_punct_if(',')) {
    }
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// --- predicates ----------------------------------------------------------------

Predicate parse_pred_or(Parser& p);

Predicate parse_pred_atom(Parser& p) {
  if (p.take_ident_if("true")) return Predicate::always();
  if (p.take_ident_if("false")) return Predicate::never();
  if (p.take_punct_if('(')) {
    Predicate inner = parse_pred_or(p);
    p.expect_punct(')');
    return inner;
  }
  if (p.take_ident_if("not")) return Predicate::neg(parse_pred_atom(p));
  if (p.peek().type != Token::Type::Ident) p.fail("expected a predicate");
  const std::string attr = p.take().text;
  if (p.take_punct_if('=')) {
    return Predicate::test(attr, p.take_name());
  }
  if (p.take_ident_if("in")) {
    p.expect_punct('{');
    std::vector<std::string> values;
    if (!p.at_punct('}')) {
      values.push_back(p.take_name());
      while (p.take_punct_if(',')) values.push_back(p.take_name());
    }
    p.expect_punct('}');
    if (values.empty()) p.fail("'in' needs at least one value");
    return Predicate::in_set(attr, std::move(values));
  }
  p.fail("expected '=' or 'in' after attribute '" + attr + "'");
}

Predicate parse_pred_and(Parser& p) {
  Predicate lhs = parse_pred_atom(p);
  while (p.take_ident_if("and")) {
    lhs = Predicate::conj(std::move(lhs), parse_pred_atom(p));
  }
  return lhs;
}

Predicate parse_pred_or(Parser& p) {
  Predicate lhs = parse_pred_and(p);
  while (p.take_ident_if("or")) {
    lhs = Predicate::disj(std::move(lhs), parse_pred_and(p));
  }
  return lhs;
}

// --- policy expressions ------------------------------------------------------

std::vector<std::string> parse_id_list(Parser& p, char open, char close) {
  p.expect_punct(open);
  std::vector<std::string> ids;
  if (!p.at_punct(close)) {
    ids.push_back(p.take_name());
    while (p.take_punct_if(',')) ids.push_back(p.take_name());
  }
  p.expect_punct(close);
  return ids;
}

std::shared_ptr<const PolicyNode> parse_expr(Parser& p, bool extended) {
  auto node = std::make_shared<PolicyNode>();
  if (p.take_ident_if("zero")) {
    node->kind = PolicyNode::Kind::Zero;
  } else if (p.take_ident_if("one")) {
    node->kind = PolicyNode::Kind::One;
  } else if (p.take_ident_if("fixed")) {
    node->kind = PolicyNode::Kind::Fixed;
    node->ids = parse_id_list(p, '{', '}');
  } else if (p.take_ident_if("weighted")) {
    node->kind = PolicyNode::Kind::Weighted;
    p.expect_punct('{');
    do {
      std::vector<std::string> subset = parse_id_list(p, '{', '}');
      p.expect_punct(':');
      node->entries.emplace_back(std::move(subset), p.take_rational());
    } while (p.take_punct_if(','));
    p.expect_punct('}');
  } else if (p.take_ident_if("priority")) {
    node->kind = PolicyNode::Kind::Priority;
    node->ids = parse_id_list(p, '[', ']');
    if (node->ids.empty()) p.fail("priority needs at least one candidate");
  } else if (p.take_ident_if("affinity")) {
    node->kind = PolicyNode::Kind::Affinity;
    p.expect_punct('(');
    node->attribute = p.take_name();
    p.expect_punct(')');
  } else if (p.take_ident_if("when")) {
    node->kind = PolicyNode::Kind::When;
    node->predicate = parse_pred_or(p);
    p.expect_ident("apply");
    node->children.push_back(parse_expr(p, extended));
  } else if (p.take_ident_if("merge")) {
    node->kind = PolicyNode::Kind::Merge;
    p.expect_punct('(');
    node->children.push_back(parse_expr(p, extended));
    while (p.take_punct_if(',')) node->children.push_back(parse_expr(p, extended));
    p.expect_punct(')');
  } else if (p.at_ident("product")) {
    if (!extended) {
      p.fail("'product' requires --extended-algebra");
    }
    p.take();
    node->kind = PolicyNode::Kind::Product;
    p.expect_punct('(');
    node->children.push_back(parse_expr(p, extended));
    p.expect_punct(',');
    node->children.push_back(parse_expr(p, extended));
    p.expect_punct(')');
  } else {
    p.fail("expected a policy expression");
  }
  return node;
}

void print_expr(const PolicyNode& node, std::ostringstream& out) {
  switch (node.kind) {
    case PolicyNode::Kind::Zero:
      out << "zero";
      break;
    case PolicyNode::Kind::One:
      out << "one";
      break;
    case PolicyNode::Kind::Fixed: {
      out << "fixed {";
      std::vector<std::string> ids = node.ids;
      std::sort(ids.begin(), ids.end());
      for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? ", " : "") << ids[i];
      out << '}';
      break;
    }
    case PolicyNode::Kind::Weighted: {
      out << "weighted {";
      for (std::size_t i = 0; i < node.entries.size(); ++i) {
        if (i) out << ", ";
        std::vector<std::string> ids = node.entries[i].first;
        std::sort(ids.begin(), ids.end());
        out << '{';
        for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? ", " : "") << ids[k];
        out << "}: " << to_text(node.entries[i].second);
      }
      out << '}';
      break;
    }
    case PolicyNode::Kind::Priority: {
      out << "priority [";
      for (std::size_t i = 0; i < node.ids.size(); ++i) out << (i ? ", " : "") << node.ids[i];
      out << ']';
      break;
    }
    case PolicyNode::Kind::Affinity:
      out << "affinity(" << node.attribute << ')';
      break;
    case PolicyNode::Kind::When:
      out << "when " << node.predicate.to_string() << " apply ";
      print_expr(*node.children.front(), out);
      break;
    case PolicyNode::Kind::Merge:
      out << "merge(";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out << ", ";
        print_expr(*node.children[i], out);
      }
      out << ')';
      break;
    case PolicyNode::Kind::Product:
      out << "product(";
      print_expr(*node.children[0], out);
      out << ", ";
      print_expr(*node.children[1], out);
      out << ')';
      break;
  }
}

// --- universe helpers ---------------------------------------------------------

std::vector<std::uint8_t> parse_ipv4(const std::string& text, Parser& p) {
  std::vector<std::uint8_t> bytes;
  std::size_t start = 0;
  for (int part = 0; part < 4; ++part) {
    const std::size_t dot = text.find('.', start);
    const std::string piece =
        text.substr(start, dot == std::string::npos ? dot : dot - start);
    if (piece.empty() || piece.size() > 3 ||
        piece.find_first_not_of("0123456789") != std::string::npos) {
      p.fail("bad IPv4 literal '" + text + "'");
    }
    const int v = std::stoi(piece);
    if (v > 255) p.fail("IPv4 octet out of range in '" + text + "'");
    bytes.push_back(static_cast<std::uint8_t>(v));
    if (part < 3) {
      if (dot == std::string::npos) p.fail("bad IPv4 literal '" + text + "'");
      start = dot + 1;
    } else if (dot != std::string::npos) {
      p.fail("bad IPv4 literal '" + text + "'");
    }
  }
  return bytes;
}

std::vector<std::uint8_t> parse_ipv6(const std::string& text, Parser& p) {
  // Full form only: eight colon-separated 16-bit hex groups.
  std::vector<std::uint8_t> bytes;
  std::size_t start = 0;
  for (int part = 0; part < 8; ++part) {
    const std::size_t colon = text.find(':', start);
    const std::string piece =
        text.substr(start, colon == std::string::npos ? colon : colon - start);
    if (piece.empty() || piece.size() > 4 ||
        piece.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
      p.fail("bad IPv6 literal '" + text + "' (full 8-group form required)");
    }
    const int v = std::stoi(piece, nullptr, 16);
    bytes.push_back(static_cast<std::uint8_t>(v >> 8));
    bytes.push_back(static_cast<std::uint8_t>(v & 0xff));
    if (part < 7) {
      if (colon == std::string::npos) p.fail("bad IPv6 literal '" + text + "'");
      start = colon + 1;
    } else if (colon != std::string::npos) {
      p.fail("bad IPv6 literal '" + text + "'");
    }
  }
  return bytes;
}

std::string format_rdata(const Candidate& c, const std::vector<std::uint8_t>& rdata) {
  std::ostringstream out;
  if (c.rrtype() == RrType::A && rdata.size() == 4) {
    out << int(rdata[0]) << '.' << int(rdata[1]) << '.' << int(rdata[2]) << '.' << int(rdata[3]);
  } else {
    static const char* digits = "0123456789abcdef";
    for (std::size_t i = 0; i + 1 < rdata.size(); i += 2) {
      if (i) out << ':';
      const std::uint16_t group = static_cast<std::uint16_t>((rdata[i] << 8) | rdata[i + 1]);
      out << digits[(group >> 12) & 0xf] << digits[(group >> 8) & 0xf]
          << digits[(group >> 4) & 0xf] << digits[group & 0xf];
    }
  }
  return out.str();
}

}  // namespace

// --- universes ----------------------------------------------------------------

std::shared_ptr<const Universe> parse_universe(const std::string& text) {
  Parser p(text);
  p.expect_ident("universe");
  p.take_name();  // the universe's display name; structure is what matters
  p.expect_punct('{');

  p.expect_ident("schema");
  p.expect_punct('{');
  AttributeSchema schema;
  while (!p.at_punct('}')) {
    Attribute attr;
    attr.name = p.take_name();
    p.expect_punct(':');
    p.expect_punct('[');
    if (!p.at_punct(']')) {
      attr.values.push_back(p.take_name());
      while (p.take_punct_if(',')) attr.values.push_back(p.take_name());
    }
    p.expect_punct(']');
    p.skip_separators();
    schema.attributes.push_back(std::move(attr));
  }
  p.expect_punct('}');

  p.expect_ident("candidates");
  p.expect_punct('{');
  std::vector<Candidate> candidates;
  while (!p.at_punct('}')) {
    const std::string id = p.take_name();
    p.expect_punct('{');
    RrType rrtype = RrType::A;
    bool have_rrtype = false, have_ttl = false;
    std::uint32_t ttl = 0;
    std::vector<std::string> rdata_texts;
    CandidateMetadata md;
    while (!p.at_punct('}')) {
      const std::string field = p.take_name();
      p.expect_punct(':');
      if (field == "rrtype") {
        const std::string t = p.take_name();
        if (t == "A") {
          rrtype = RrType::A;
        } else if (t == "AAAA") {
          rrtype = RrType::AAAA;
        } else {
          p.fail("rrtype must be A or AAAA");
        }
        have_rrtype = true;
      } else if (field == "ttl") {
        ttl = static_cast<std::uint32_t>(p.take_integer());
        have_ttl = true;
      } else if (field == "rdata") {
        p.expect_punct('[');
        if (!p.at_punct(']')) {
          do {
            rdata_texts.push_back(p.peek().type == Token::Type::String ? p.take_string()
                                                                       : p.take_name());
          } while (p.take_punct_if(','));
        }
        p.expect_punct(']');
      } else if (field == "weight") {
        md.weight = p.take_rational();
      } else if (field == "priority") {
        md.priority = p.take_integer();
      } else if (field == "tag") {
        md.tag = p.take_name();
      } else if (field == "health") {
        const std::size_t hline = p.peek().line;
        const std::size_t hcol = p.peek().col;
        const std::string h = p.take_name();
        std::string folded = h;
        for (char& ch : folded) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (folded == "up") {
          md.health = Health::Up;
        } else if (folded == "down") {
          md.health = Health::Down;
        } else {
          fail_at(hline, hcol, "health must be up or down (got '" + h + "')");
        }
      } else {
        p.fail("unknown candidate field '" + field + "'");
      }
      p.skip_separators();
    }
    p.expect_punct('}');
    p.skip_separators();
    if (!have_rrtype || !have_ttl || rdata_texts.empty()) {
      p.fail("candidate '" + id + "' needs rrtype, ttl and rdata");
    }
    std::vector<ResourceRecord> records;
    for (const std::string& t : rdata_texts) {
      ResourceRecord rec;
      rec.rrtype = rrtype;
      rec.ttl = ttl;
      rec.rdata = rrtype == RrType::A ? parse_ipv4(t, p) : parse_ipv6(t, p);
      records.push_back(std::move(rec));
    }
    candidates.push_back(Candidate::create(id, records, md));
  }
  p.expect_punct('}');
  p.expect_punct('}');
  if (!p.at_end()) p.fail("trailing input after universe");
  return Universe::create(std::move(schema), std::move(candidates));
}

std::string print_universe(const Universe& u, const std::string& name) {
  std::ostringstream out;
  out << "universe " << name << " {\n  schema {\n";
  for (const Attribute& a : u.schema().attributes) {
    out << "    " << a.name << ": [";
    for (std::size_t i = 0; i < a.values.size(); ++i) out << (i ? ", " : "") << a.values[i];
    out << "]\n";
  }
  out << "  }\n  candidates {\n";
  for (const Candidate& c : u.candidates()) {
    out << "    " << c.id() << " { rrtype: " << to_string(c.rrtype()) << "  ttl: " << c.ttl()
        << "  rdata: [";
    for (std::size_t i = 0; i < c.rdata().size(); ++i) {
      out << (i ? ", " : "") << '"' << format_rdata(c, c.rdata()[i]) << '"';
    }
    out << "]  weight: " << to_text(c.metadata().weight) << "  priority: " << c.metadata().priority
        << "  tag: " << c.metadata().tag << "  health: " << to_string(c.metadata().health)
        << " }\n";
  }
  out << "  }\n}\n";
  return out.str();
}

// --- policies -------------------------------------------------------------------

PolicyDocument parse_policy(const std::string& text, bool extended_algebra) {
  Parser p(text);
  PolicyDocument doc;
  if (p.at_ident("universe")) {
    p.take();
    doc.universe_ref = p.take_string();
  }
  doc.expression = parse_expr(p, extended_algebra);
  if (!p.at_end()) p.fail("trailing input after policy expression");
  return doc;
}

std::string print_policy(const PolicyDocument& doc) {
  std::ostringstream out;
  if (!doc.universe_ref.empty()) out << "universe \"" << doc.universe_ref << "\"\n";
  print_expr(*doc.expression, out);
  out << '\n';
  return out.str();
}

Behavior elaborate(const PolicyDocument& doc, const std::shared_ptr<const Universe>& u) {
  const PolicyNode& n = *doc.expression;
  switch (n.kind) {
    case PolicyNode::Kind::Zero:
      return zero(u);
    case PolicyNode::Kind::One:
      return one(u);
    case PolicyNode::Kind::Fixed:
      return fixed(u, n.ids);
    case PolicyNode::Kind::Weighted:
      return weighted(u, n.entries);
    case PolicyNode::Kind::Priority:
      return priority(u, n.ids);
    case PolicyNode::Kind::Affinity:
      return affinity(u, n.attribute);
    case PolicyNode::Kind::When: {
      PolicyDocument child{"", n.children.front()};
      return mul(gate_of(n.predicate, u), elaborate(child, u));
    }
    case PolicyNode::Kind::Merge: {
      Behavior acc = zero(u);
      for (const auto& child : n.children) {
        PolicyDocument c{"", child};
        acc = add(acc, elaborate(c, u));
      }
      return acc;
    }
    case PolicyNode::Kind::Product: {
      PolicyDocument a{"", n.children[0]}, b{"", n.children[1]};
      return mul(elaborate(a, u), elaborate(b, u));
    }
  }
  throw Error(ErrorKind::InvalidInput, "corrupt policy tree");
}

// --- profiles -------------------------------------------------------------------

RealizationProfile parse_profile(const std::string& text) {
  Parser p(text);
  p.expect_ident("profile");
  RealizationProfile profile;
  profile.name = p.take_name();
  p.expect_punct('{');
  while (!p.at_punct('}')) {
    const std::string field = p.take_name();
    p.expect_punct(':');
    if (field == "attributes") {
      std::set<std::string> attrs;
      for (std::string& a : parse_id_list(p, '[', ']')) attrs.insert(std::move(a));
      profile.allowed_attributes = std::move(attrs);
    } else if (field == "selections") {
      std::set<SelectionKind> sels;
      for (const std::string& s : parse_id_list(p, '[', ']')) {
        sels.insert(selection_kind_from_string(s));
      }
      profile.allowed_selections = std::move(sels);
    } else if (field == "weight_quantum") {
      if (p.take_ident_if("none")) {
        profile.weight_quantum.reset();
      } else {
        profile.weight_quantum = p.take_rational();
      }
    } else if (field == "max_regions") {
      if (p.take_ident_if("none")) {
        profile.max_regions.reset();
      } else {
        profile.max_regions = static_cast<std::size_t>(p.take_integer());
      }
    } else if (field == "forget_distribution") {
      if (p.take_ident_if("true")) {
        profile.forget_distribution = true;
      } else if (p.take_ident_if("false")) {
        profile.forget_distribution = false;
      } else {
        p.fail("forget_distribution must be true or false");
      }
    } else {
      p.fail("unknown profile field '" + field + "'");
    }
    p.skip_separators();
  }
  p.expect_punct('}');
  if (!p.at_end()) p.fail("trailing input after profile");
  profile.validate();
  return profile;
}

std::string print_profile(const RealizationProfile& profile) {
  std::ostringstream out;
  out << "profile " << profile.name << " {\n";
  if (profile.allowed_attributes) {
    out << "  attributes: [";
    std::size_t i = 0;
    for (const std::string& a : *profile.allowed_attributes) out << (i++ ? ", " : "") << a;
    out << "]\n";
  }
  if (profile.allowed_selections) {
    out << "  selections: [";
    std::size_t i = 0;
    for (SelectionKind k : *profile.allowed_selections) out << (i++ ? ", " : "") << to_string(k);
    out << "]\n";
  }
  out << "  weight_quantum: "
      << (profile.weight_quantum ? to_text(*profile.weight_quantum) : "none") << '\n';
  out << "  max_regions: "
      << (profile.max_regions ? std::to_string(*profile.max_regions) : "none") << '\n';
  out << "  forget_distribution: " << (profile.forget_distribution ? "true" : "false") << '\n';
  out << "}\n";
  return out.str();
}

// --- normal forms ----------------------------------------------------------------

namespace {

void print_outcome(const Universe& u, const OutcomeRow& outcome, std::ostringstream& out) {
  if (outcome.is_zero()) {
    out << "empty";
    return;
  }
  const bool sure = outcome.support_size() == 1 && outcome.entries().begin()->second == 1;
  if (sure) {
    out << "fixed {";
    const auto ids = u.subset_ids(u.subset_mask(outcome.entries().begin()->first));
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? ", " : "") << ids[i];
    out << '}';
    return;
  }
  out << "weighted {";
  std::size_t i = 0;
  for (const auto& [ord, w] : outcome.entries()) {
    if (i++) out << ", ";
    out << '{';
    const auto ids = u.subset_ids(u.subset_mask(ord));
    for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? ", " : "") << ids[k];
    out << "}: " << to_text(w);
  }
  out << '}';
}

}  // namespace

std::string print_normal_form(const NormalForm& nf) {
  std::ostringstream out;
  for (const Region& r : nf.regions()) {
    out << "when " << r.predicate.to_string() << " serve ";
    print_outcome(*nf.universe(), r.outcome, out);
    out << '\n';
  }
  return out.str();
}

NormalForm parse_normal_form(const std::string& text, const std::shared_ptr<const Universe>& u) {
  Parser p(text);
  std::vector<Region> regions;
  while (!p.at_end()) {
    p.expect_ident("when");
    Region r;
    r.predicate = parse_pred_or(p);
    r.predicate.validate(*u);
    p.expect_ident("serve");
    if (p.take_ident_if("empty")) {
      // zero row
    } else if (p.take_ident_if("fixed")) {
      std::uint32_t mask = 0;
      for (const std::string& id : parse_id_list(p, '{', '}')) {
        mask |= std::uint32_t{1} << u->candidate_index(id);
      }
      r.outcome.set(u->subset_ordinal(mask), 1);
    } else if (p.take_ident_if("weighted")) {
      p.expect_punct('{');
      do {
        std::uint32_t mask = 0;
        for (const std::string& id : parse_id_list(p, '{', '}')) {
          mask |= std::uint32_t{1} << u->candidate_index(id);
        }
        p.expect_punct(':');
        r.outcome.accumulate(u->subset_ordinal(mask), p.take_rational());
      } while (p.take_punct_if(','));
      p.expect_punct('}');
      r.outcome = r.outcome.normalized();
    } else {
      p.fail("expected empty, fixed or weighted outcome");
    }
    regions.push_back(std::move(r));
  }
  if (regions.empty()) {
    throw Error(ErrorKind::SemanticError, "a normal form needs at least one clause");
  }
  // The clauses must partition the context space.
  for (std::size_t c = 0; c < u->context_count(); ++c) {
    const QueryContext ctx = u->context_at(c);
    std::size_t hits = 0;
    for (Region& r : regions) {
      if (r.predicate.eval(ctx)) {
        r.contexts.push_back(c);
        ++hits;
      }
    }
    if (hits != 1) {
      throw Error(ErrorKind::SemanticError,
                  "normal form clauses must cover context " + ctx.to_string() + " exactly once");
    }
  }
  for (const Region& r : regions) {
    if (r.contexts.empty()) {
      throw Error(ErrorKind::SemanticError,
                  "clause [" + r.predicate.to_string() + "] matches no context");
    }
  }
  return NormalForm(u, std::move(regions));
}

// --- contexts ---------------------------------------------------------------------

QueryContext parse_context(const std::string& text, const std::shared_ptr<const Universe>& u) {
  Parser p(text);
  std::map<std::string, std::string> assignment;
  while (!p.at_end()) {
    const std::string attr = p.take_name();
    p.expect_punct('=');
    const std::string value = p.take_name();
    if (!assignment.emplace(attr, value).second) {
      throw Error(ErrorKind::SemanticError, "attribute '" + attr + "' assigned twice");
    }
    p.skip_separators();
  }
  return u->make_context(assignment);
}

Predicate parse_predicate(const std::string& text) {
  Parser p(text);
  Predicate pred = parse_pred_or(p);
  if (!p.at_end()) p.fail("trailing input after predicate");
  return pred;
}

}  // namespace steerlab
