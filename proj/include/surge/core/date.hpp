#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace surge {

/// Calendar day. Serialized as ISO-8601 `YYYY-MM-DD`.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    /// Throws ValidationError on anything that is not a valid `YYYY-MM-DD`.
    static Date parse(std::string_view text);

    std::string iso() const;
    constexpr std::chrono::sys_days sys_days() const { return days_; }

    Date plus_days(int n) const { return Date(days_ + std::chrono::days(n)); }
    /// Signed day count `other - *this`.
    int days_until(const Date& other) const {
        return static_cast<int>((other.days_ - days_).count());
    }

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

}  // namespace surge
