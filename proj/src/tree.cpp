#include "proftree/tree.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace proftree {

// -------------------------------------------------------------- alphabet ---

std::string RankedAlphabet::format() const {
  std::string s = "[";
  for (size_t i = 0; i < arities.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(arities[i]);
  }
  return s + "]";
}

RankedAlphabet RankedAlphabet::parse(const std::string& text) {
  RankedAlphabet sigma;
  std::string cur;
  int line = 1, col = 0;
  for (char c : text + " ") {
    ++col;
    if (c == '\n') {
      ++line;
      col = 0;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      cur += c;
      continue;
    }
    if (!cur.empty()) {
      sigma.arities.push_back(std::stoi(cur));
      cur.clear();
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '[' ||
        c == ']')
      continue;
    throw ParseError(line, col, std::string("unexpected '") + c + "' in alphabet");
  }
  return sigma;
}

// ----------------------------------------------------------------- trees ---

struct Tree::Node {
  int letter;  // 0 = variable, otherwise 1-based letter
  int var;     // 1-based when letter == 0
  std::vector<Tree> children;
};

Tree Tree::variable(int index) {
  if (index < 1) throw IndexOutOfRange("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->letter = 0;
  n->var = index;
  return Tree(std::move(n));
}

Tree Tree::node(int letter, std::vector<Tree> children) {
  if (letter < 1) throw IndexOutOfRange("letter index must be >= 1");
  auto n = std::make_shared<Node>();
  n->letter = letter;
  n->var = 0;
  n->children = std::move(children);
  return Tree(std::move(n));
}

bool Tree::is_variable() const { return node_->letter == 0; }
int Tree::var_index() const { return node_->var; }
int Tree::letter() const { return node_->letter; }
const std::vector<Tree>& Tree::children() const { return node_->children; }

bool Tree::operator==(const Tree& other) const {
  if (node_ == other.node_) return true;
  if (node_->letter != other.node_->letter || node_->var != other.node_->var)
    return false;
  const auto& a = node_->children;
  const auto& b = other.node_->children;
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

int tree_size(const Tree& t) {
  int n = 1;
  for (const auto& c : t.children()) n += tree_size(c);
  return n;
}

int tree_height(const Tree& t) {
  if (t.is_variable()) return 0;
  int h = 0;
  for (const auto& c : t.children()) h = std::max(h, tree_height(c));
  return 1 + h;
}

int tree_max_var(const Tree& t) {
  if (t.is_variable()) return t.var_index();
  int m = 0;
  for (const auto& c : t.children()) m = std::max(m, tree_max_var(c));
  return m;
}

void validate_tree(const RankedAlphabet& sigma, int vars, const Tree& t) {
  if (t.is_variable()) {
    if (t.var_index() > vars)
      throw IndexOutOfRange("variable x" + std::to_string(t.var_index()) +
                            " exceeds bound " + std::to_string(vars));
    return;
  }
  int k = sigma.arity(t.letter());
  if (static_cast<size_t>(k) != t.children().size())
    throw ArityMismatch("letter a" + std::to_string(t.letter()) + " has arity " +
                        std::to_string(k) + ", got " +
                        std::to_string(t.children().size()) + " children");
  for (const auto& c : t.children()) validate_tree(sigma, vars, c);
}

Tree tree_subst(const Tree& t, const std::vector<Tree>& args) {
  if (t.is_variable()) {
    size_t i = static_cast<size_t>(t.var_index());
    if (i > args.size())
      throw ArityMismatch("substitution provides " + std::to_string(args.size()) +
                          " trees but x" + std::to_string(t.var_index()) +
                          " occurs");
    return args[i - 1];
  }
  std::vector<Tree> ch;
  ch.reserve(t.children().size());
  for (const auto& c : t.children()) ch.push_back(tree_subst(c, args));
  return Tree::node(t.letter(), std::move(ch));
}

bool tree_less(const Tree& a, const Tree& b) {
  int sa = tree_size(a), sb = tree_size(b);
  if (sa != sb) return sa < sb;
  if (a.is_variable() != b.is_variable()) return a.is_variable();
  if (a.is_variable()) return a.var_index() < b.var_index();
  if (a.letter() != b.letter()) return a.letter() < b.letter();
  const auto& ca = a.children();
  const auto& cb = b.children();
  for (size_t i = 0; i < ca.size() && i < cb.size(); ++i) {
    if (tree_less(ca[i], cb[i])) return true;
    if (tree_less(cb[i], ca[i])) return false;
  }
  return ca.size() < cb.size();
}

namespace {

// Children tuples with total size `budget`, lexicographic in the canonical
// order; appends to out.
void child_tuples(const RankedAlphabet& sigma, int vars, int k, int budget,
                  std::vector<Tree>& prefix, std::vector<std::vector<Tree>>& out) {
  if (k == 0) {
    if (budget == 0) out.push_back(prefix);
    return;
  }
  // first child takes sizes 1 .. budget-(k-1), smallest first
  for (int s = 1; s + (k - 1) <= budget; ++s) {
    for (const auto& c : enumerate_trees(sigma, vars, s)) {
      prefix.push_back(c);
      child_tuples(sigma, vars, k - 1, budget - s, prefix, out);
      prefix.pop_back();
    }
  }
}

}  // namespace

std::vector<Tree> enumerate_trees(const RankedAlphabet& sigma, int vars, int size) {
  std::vector<Tree> out;
  if (size < 1) return out;
  if (size == 1) {
    for (int i = 1; i <= vars; ++i) out.push_back(Tree::variable(i));
    for (int j = 1; j <= sigma.letters(); ++j)
      if (sigma.arity(j) == 0) out.push_back(Tree::node(j, {}));
    return out;
  }
  for (int j = 1; j <= sigma.letters(); ++j) {
    int k = sigma.arity(j);
    if (k == 0) continue;
    std::vector<std::vector<Tree>> tuples;
    std::vector<Tree> prefix;
    child_tuples(sigma, vars, k, size - 1, prefix, tuples);
    for (auto& tup : tuples) out.push_back(Tree::node(j, std::move(tup)));
  }
  return out;
}

std::vector<Tree> enumerate_trees_up_to(const RankedAlphabet& sigma, int vars,
                                        int max_size) {
  std::vector<Tree> out;
  for (int s = 1; s <= max_size; ++s)
    for (auto& t : enumerate_trees(sigma, vars, s)) out.push_back(std::move(t));
  return out;
}

// ------------------------------------------------------------ parse/print ---

std::string format_tree(const Tree& t) {
  if (t.is_variable()) return "x" + std::to_string(t.var_index());
  if (t.children().empty()) return "a" + std::to_string(t.letter());
  std::string s = "(a" + std::to_string(t.letter());
  for (const auto& c : t.children()) s += " " + format_tree(c);
  return s + ")";
}

namespace {

struct TreeLexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit TreeLexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line, col, what);
  }

  void advance() {
    if (pos < src.size()) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance();
  }

  bool eof() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  // "a<j>" or "x<i>"
  std::pair<char, int> symbol() {
    skip_ws();
    if (pos >= src.size()) fail("expected a letter or variable");
    char kind = src[pos];
    if (kind != 'a' && kind != 'x')
      fail(std::string("expected a<j> or x<i>, found '") + kind + "'");
    advance();
    std::string digits;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      digits += src[pos];
      advance();
    }
    if (digits.empty()) fail("expected an index after the symbol kind");
    return {kind, std::stoi(digits)};
  }
};

Tree parse_tree_expr(TreeLexer& lx, const RankedAlphabet& sigma, int vars) {
  if (lx.peek() == '(') {
    lx.advance();
    auto [kind, idx] = lx.symbol();
    if (kind == 'x') lx.fail("variables take no children");
    if (idx < 1 || idx > sigma.letters())
      lx.fail("letter a" + std::to_string(idx) + " not in alphabet " +
              sigma.format());
    int k = sigma.arity(idx);
    std::vector<Tree> children;
    while (lx.peek() != ')') {
      if (lx.eof()) lx.fail("unterminated node");
      children.push_back(parse_tree_expr(lx, sigma, vars));
    }
    lx.advance();  // ')'
    if (static_cast<int>(children.size()) != k)
      lx.fail("letter a" + std::to_string(idx) + " has arity " + std::to_string(k) +
              ", got " + std::to_string(children.size()) + " children");
    return Tree::node(idx, std::move(children));
  }
  auto [kind, idx] = lx.symbol();
  if (kind == 'x') {
    if (idx < 1 || idx > vars)
      lx.fail("variable x" + std::to_string(idx) + " exceeds bound " +
              std::to_string(vars));
    return Tree::variable(idx);
  }
  if (idx < 1 || idx > sigma.letters())
    lx.fail("letter a" + std::to_string(idx) + " not in alphabet " + sigma.format());
  if (sigma.arity(idx) != 0)
    lx.fail("letter a" + std::to_string(idx) + " has arity " +
            std::to_string(sigma.arity(idx)) + " and needs parentheses");
  return Tree::node(idx, {});
}

}  // namespace

Tree parse_tree(const RankedAlphabet& sigma, int vars, const std::string& text) {
  TreeLexer lx(text);
  Tree t = parse_tree_expr(lx, sigma, vars);
  if (!lx.eof()) lx.fail("trailing input after tree");
  return t;
}

}  // namespace proftree
