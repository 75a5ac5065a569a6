#include "redpath/signature.hpp"

#include <sstream>

namespace redpath {

Word::Word(std::span<const int> indices) {
  if (indices.size() > static_cast<std::size_t>(kMaxDepth)) {
    throw std::invalid_argument("words are limited to 16 letters");
  }
  for (int i : indices) {
    if (i < 1 || i > kMaxLetters) throw std::invalid_argument("word letters must lie in [1, 15]");
    *this = push(i);
  }
}

std::vector<int> Word::indices() const {
  std::vector<int> out(static_cast<std::size_t>(size_));
  for (int k = 0; k < size_; ++k) out[static_cast<std::size_t>(k)] = (*this)[k];
  return out;
}

bool Word::square_free() const {
  for (int k = 1; k < size_; ++k) {
    if ((*this)[k] == (*this)[k - 1]) return false;
  }
  return true;
}

std::string Word::str() const {
  std::string s;
  for (int k = 0; k < size_; ++k) {
    if (k) s += ' ';
    s += std::to_string((*this)[k]);
  }
  return s;
}

Word Word::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<int> idx;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad word letter '" + tok + "'");
    }
    if (used != tok.size()) throw std::invalid_argument("bad word letter '" + tok + "'");
    idx.push_back(v);
  }
  return Word(idx);
}

}  // namespace redpath
