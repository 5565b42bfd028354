#pragma once

#include "morphic/morphic.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace testing_support {

inline std::filesystem::path data_dir() { return MORPHIC_DATA_DIR; }

inline morphic::System load(const std::string& relative) { return morphic::load_system((data_dir() / relative).string()); }

/// Corpus files in a subdirectory, sorted by name.
inline std::vector<std::filesystem::path> corpus(const std::string& sub) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(data_dir() / sub))
    if (e.path().extension() == ".txt") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline morphic::System fibonacci() { return morphic::make_system("ab", {"ab", "a"}, 'a'); }
inline morphic::System thue_morse() { return morphic::make_system("01", {"01", "10"}, '0'); }
inline morphic::System chacon_nonur() { return morphic::make_system("01", {"001", "1"}, '0'); }

inline morphic::Word w(const morphic::System& s, const std::string& text) { return s.alphabet.parse(text); }

}  // namespace testing_support
