#pragma once

// Ranked alphabets and the trees they generate.  Letters are 1-based
// (a1..al), variables are 1-based (x1..xn); a tree over n variables may use
// any subset of x1..xn.  The canonical tree order (size, then variables
// before nodes, then root letter, then children lexicographically) fixes
// every enumeration and search result in the library.

#include <memory>
#include <string>
#include <vector>

#include "proftree/errors.hpp"

namespace proftree {

struct RankedAlphabet {
  std::vector<int> arities;  // arities[j-1] = arity of letter j

  int letters() const { return static_cast<int>(arities.size()); }
  int arity(int letter) const {  // 1-based
    if (letter < 1 || letter > letters())
      throw IndexOutOfRange("letter a" + std::to_string(letter) +
                            " not in alphabet of " + std::to_string(letters()));
    return arities[static_cast<size_t>(letter) - 1];
  }

  std::string format() const;  // "[0, 1]"
  // Accepts "[0, 1]" or whitespace/comma separated naturals.
  static RankedAlphabet parse(const std::string& text);
};

class Tree {
public:
  static Tree variable(int index);  // 1-based
  static Tree node(int letter, std::vector<Tree> children);

  bool is_variable() const;
  int var_index() const;   // variable only
  int letter() const;      // node only
  const std::vector<Tree>& children() const;

  bool operator==(const Tree& other) const;
  bool operator!=(const Tree& other) const { return !(*this == other); }

private:
  struct Node;
  explicit Tree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

int tree_size(const Tree& t);     // every variable and node counts 1
int tree_height(const Tree& t);   // variables 0, nodes 1 + max child height
int tree_max_var(const Tree& t);  // 0 for variable-free trees

// Throws ArityMismatch / IndexOutOfRange if t is not a valid tree over the
// alphabet with variables among x1..xn.
void validate_tree(const RankedAlphabet& sigma, int vars, const Tree& t);

// Grafting: t uses variables x1..xm, args are m trees over x1..xn.
Tree tree_subst(const Tree& t, const std::vector<Tree>& args);

// The canonical strict order described above.
bool tree_less(const Tree& a, const Tree& b);

// All trees of exactly `size` / at most `max_size`, in canonical order.
std::vector<Tree> enumerate_trees(const RankedAlphabet& sigma, int vars, int size);
std::vector<Tree> enumerate_trees_up_to(const RankedAlphabet& sigma, int vars,
                                        int max_size);

std::string format_tree(const Tree& t);  // "(a1 (a2 x1) x2)", leaves bare
Tree parse_tree(const RankedAlphabet& sigma, int vars, const std::string& text);

}  // namespace proftree
