#include "emosim/porter_stemmer.h"

#include <array>
#include <utility>

namespace emosim {
namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

constexpr std::array kStep2 = {
    Rule{"ational", "ate"}, Rule{"tional", "tion"}, Rule{"enci", "ence"},
    Rule{"anci", "ance"},   Rule{"izer", "ize"},    Rule{"abli", "able"},
    Rule{"alli", "al"},     Rule{"entli", "ent"},   Rule{"eli", "e"},
    Rule{"ousli", "ous"},   Rule{"ization", "ize"}, Rule{"ation", "ate"},
    Rule{"ator", "ate"},    Rule{"alism", "al"},    Rule{"iveness", "ive"},
    Rule{"fulness", "ful"}, Rule{"ousness", "ous"}, Rule{"aliti", "al"},
    Rule{"iviti", "ive"},   Rule{"biliti", "ble"},
};

constexpr std::array kStep3 = {
    Rule{"icate", "ic"}, Rule{"ative", ""}, Rule{"alize", "al"},
    Rule{"iciti", "ic"}, Rule{"ical", "ic"}, Rule{"ful", ""},
    Rule{"ness", ""},
};

constexpr std::array<std::string_view, 19> kStep4 = {
    "al",  "ance", "ence", "er",  "ic",  "able", "ible",
    "ant", "ement", "ment", "ent", "ion", "ou",   "ism",
    "ate", "iti",  "ous",  "ive", "ize",
};

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : w_(word) {}

  std::string Run() && {
    if (w_.size() <= 2) return std::move(w_);
    Step1a();
    Step1b();
    Step1c();
    ApplyLongest(kStep2, 0);
    ApplyLongest(kStep3, 0);
    Step4();
    Step5();
    return std::move(w_);
  }

 private:
  bool IsConsonant(std::size_t i) const {
    switch (w_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !IsConsonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in w_[0, len).
  int Measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && IsConsonant(i)) ++i;
    while (i < len) {
      while (i < len && !IsConsonant(i)) ++i;
      if (i >= len) break;
      while (i < len && IsConsonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool HasVowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i)
      if (!IsConsonant(i)) return true;
    return false;
  }

  bool EndsDoubleConsonant(std::size_t len) const {
    return len >= 2 && w_[len - 1] == w_[len - 2] && IsConsonant(len - 1);
  }

  // *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
  bool EndsCvc(std::size_t len) const {
    if (len < 3) return false;
    if (!IsConsonant(len - 1) || IsConsonant(len - 2) || !IsConsonant(len - 3))
      return false;
    const char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool EndsWith(std::string_view s) const {
    return w_.size() >= s.size() &&
           std::string_view(w_).substr(w_.size() - s.size()) == s;
  }

  void Replace(std::size_t suffix_len, std::string_view replacement) {
    w_.resize(w_.size() - suffix_len);
    w_.append(replacement);
  }

  template <std::size_t N>
  void ApplyLongest(const std::array<Rule, N>& rules, int min_measure) {
    const Rule* best = nullptr;
    for (const auto& r : rules)
      if (EndsWith(r.suffix) && (!best || r.suffix.size() > best->suffix.size()))
        best = &r;
    if (!best) return;
    if (Measure(w_.size() - best->suffix.size()) > min_measure)
      Replace(best->suffix.size(), best->replacement);
  }

  void Step1a() {
    if (EndsWith("sses")) {
      Replace(4, "ss");
    } else if (EndsWith("ies")) {
      Replace(3, "i");
    } else if (EndsWith("ss")) {
      // unchanged
    } else if (EndsWith("s")) {
      Replace(1, "");
    }
  }

  void Step1b() {
    if (EndsWith("eed")) {
      if (Measure(w_.size() - 3) > 0) Replace(3, "ee");
      return;
    }
    std::size_t cut = 0;
    if (EndsWith("ed") && HasVowel(w_.size() - 2)) {
      cut = 2;
    } else if (EndsWith("ing") && HasVowel(w_.size() - 3)) {
      cut = 3;
    }
    if (cut == 0) return;
    Replace(cut, "");
    if (EndsWith("at") || EndsWith("bl") || EndsWith("iz")) {
      w_.push_back('e');
    } else if (EndsDoubleConsonant(w_.size())) {
      const char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (Measure(w_.size()) == 1 && EndsCvc(w_.size())) {
      w_.push_back('e');
    }
  }

  void Step1c() {
    if (EndsWith("y") && HasVowel(w_.size() - 1)) w_.back() = 'i';
  }

  void Step4() {
    std::string_view best;
    for (auto s : kStep4)
      if (EndsWith(s) && s.size() > best.size()) best = s;
    if (best.empty()) return;
    const std::size_t stem = w_.size() - best.size();
    if (Measure(stem) <= 1) return;
    if (best == "ion" && !(stem > 0 && (w_[stem - 1] == 's' || w_[stem - 1] == 't')))
      return;
    w_.resize(stem);
  }

  void Step5() {
    if (EndsWith("e")) {
      const std::size_t stem = w_.size() - 1;
      const int m = Measure(stem);
      if (m > 1 || (m == 1 && !EndsCvc(stem))) w_.pop_back();
    }
    if (Measure(w_.size()) > 1 && EndsDoubleConsonant(w_.size()) && w_.back() == 'l')
      w_.pop_back();
  }

  std::string w_;
};

}  // namespace

std::string PorterStem(std::string_view word) { return Stemmer(word).Run(); }

}  // namespace emosim
