#pragma once

#include <string>
#include <vector>

#include "momentgaps/gaps.hpp"
#include "support.hpp"

namespace testing_support {

// Published regression sequences; "x" marks the gap.
namespace ex_last {
inline const std::vector<std::string> beta1{"1", "0", "1", "0", "2", "0", "5", "0", "14", "0", "42", "0", "132", "0",
                                            "429", "0", "2000", "x", "338881"};
inline const std::vector<std::string> beta2{
    "14",          "7/2",           "79/4",           "-67/8",           "1055/16",          "-1935/32",
    "18195/64",    "-43115/128",    "336151/256",     "-926695/512",     "6407195/1024",     "-19736547/2048",
    "124731423/4096", "-419176415/8192", "2469281827/16384", "-8894873563/32768", "49568350247/65536", "x",
    "1006568996907/262144"};
inline const std::vector<std::string> beta3{"8",         "0", "78",          "0", "1446",         "0", "32838",
                                            "0",         "794886",          "0", "19651398",     "0", "489352326",
                                            "0",         "12216629958",     "0", "305262005766", "x", "7630169896518"};
}  // namespace ex_last

namespace ex_first {
inline const std::vector<std::string> beta1{"1",          "x", "11",          "0", "979/5",         "0", "4103",
                                            "0",          "462979/5",         "0", "2174855",       "0", "261453379/5",
                                            "0",          "1275350087",       "0", "156925970179/5", "0", "776760884999"};
inline const std::vector<std::string> beta2{"1",         "x", "15/2",         "0", "177/2",         "0", "2445/2",
                                            "0",         "36177/2",          "0", "554325/2",      "0", "8656377/2",
                                            "0",         "136617405/2",      "0", "2169039777/2",  "0", "138214318741/8"};
inline const std::vector<std::string> beta3{"1",         "x", "15/2",         "0", "177/2",         "0", "2445/2",
                                            "0",         "36177/2",          "0", "554325/2",      "0", "8656377/2",
                                            "0",         "136617405/2",      "0", "2169039777/2",  "0", "34553579685/2"};
// Every entry divided by 9.
inline const std::vector<std::string> beta4{
    "9",          "x",           "133",          "-235",           "3157",          "-7987",         "86893",
    "-281995",    "2598757",     "-10096867",    "82154653",       "-362972155",    "2699153557",    "-13062280147",
    "91112865613", "-470199300715", "3134918735557", "-16926788453827", "109327177835773"};
}  // namespace ex_first

template <class T = Surd>
mgap::GappedSequence<T> gapped(mgap::GapPattern p, const std::vector<std::string>& entries,
                               const Rational& scale = Rational(1)) {
  std::vector<std::optional<T>> out;
  for (const auto& e : entries) {
    if (e == "x") {
      out.emplace_back();
      continue;
    }
    const Rational v = mgap::parse_rational(e) * scale;
    if constexpr (std::is_same_v<T, Surd>) out.emplace_back(Surd(v));
    else out.emplace_back(mgap::to_double(v));
  }
  return mgap::GappedSequence<T>::from_entries(p, out);
}

}  // namespace testing_support
