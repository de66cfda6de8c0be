#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hoprank {

/// Concrete navigation types. Every classified transition carries exactly one.
enum class NavigationType : std::uint8_t {
  Details,          ///< DE
  DirectClick,      ///< DC
  DirectUrl,        ///< DU
  Expand,           ///< EX
  ExternalLink,     ///< EL
  ExternalSearch,   ///< ES
  LocalSearch,      ///< LS
};

inline constexpr std::size_t kNavigationTypeCount = 7;

inline constexpr std::array<NavigationType, kNavigationTypeCount> kNavigationTypes{
    NavigationType::Details,      NavigationType::DirectClick,  NavigationType::DirectUrl,
    NavigationType::Expand,       NavigationType::ExternalLink, NavigationType::ExternalSearch,
    NavigationType::LocalSearch};

/// Two-letter code ("DE", "DC", ...).
std::string_view code(NavigationType type);

/// Accepts the two-letter code, case-insensitive.
std::optional<NavigationType> parse_navigation_type(std::string_view s);

/// Selects one navigation type or ALL (their union, never stored on a transition).
class NavFilter {
 public:
  static constexpr NavFilter all() { return NavFilter(std::nullopt); }
  static constexpr NavFilter only(NavigationType t) { return NavFilter(t); }

  /// "ALL" or a two-letter code.
  static std::optional<NavFilter> parse(std::string_view s);

  constexpr bool is_all() const { return !type_.has_value(); }
  constexpr std::optional<NavigationType> type() const { return type_; }
  constexpr bool matches(NavigationType t) const { return !type_ || *type_ == t; }
  std::string name() const;

  /// Column order used in reports: the seven types, then ALL.
  constexpr int order() const { return type_ ? static_cast<int>(*type_) : kNavigationTypeCount; }

  friend constexpr bool operator==(NavFilter a, NavFilter b) { return a.type_ == b.type_; }
  friend constexpr bool operator<(NavFilter a, NavFilter b) { return a.order() < b.order(); }

 private:
  constexpr explicit NavFilter(std::optional<NavigationType> t) : type_(t) {}
  std::optional<NavigationType> type_;
};

/// The seven concrete filters followed by ALL.
std::array<NavFilter, kNavigationTypeCount + 1> all_nav_filters();

}  // namespace hoprank
