#include "hoprank/navigation.hpp"

#include <cctype>

#include "hoprank/text.hpp"

namespace hoprank {

namespace {
constexpr std::array<std::string_view, kNavigationTypeCount> kCodes{"DE", "DC", "DU", "EX",
                                                                    "EL", "ES", "LS"};
}

std::string_view code(NavigationType type) { return kCodes[static_cast<std::size_t>(type)]; }

std::optional<NavigationType> parse_navigation_type(std::string_view s) {
  std::string upper(text::trim(s));
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kCodes.size(); ++i) {
    if (upper == kCodes[i]) return static_cast<NavigationType>(i);
  }
  return std::nullopt;
}

std::optional<NavFilter> NavFilter::parse(std::string_view s) {
  if (text::lower(text::trim(s)) == "all") return all();
  if (auto t = parse_navigation_type(s)) return only(*t);
  return std::nullopt;
}

std::string NavFilter::name() const { return type_ ? std::string(code(*type_)) : "ALL"; }

std::array<NavFilter, kNavigationTypeCount + 1> all_nav_filters() {
  return {NavFilter::only(NavigationType::Details),      NavFilter::only(NavigationType::DirectClick),
          NavFilter::only(NavigationType::DirectUrl),    NavFilter::only(NavigationType::Expand),
          NavFilter::only(NavigationType::ExternalLink), NavFilter::only(NavigationType::ExternalSearch),
          NavFilter::only(NavigationType::LocalSearch),  NavFilter::all()};
}

}  // namespace hoprank
