#ifndef PGAP_TESTS_REFERENCE_DATA_HPP
#define PGAP_TESTS_REFERENCE_DATA_HPP

#include <array>
#include <cstdint>

#include "pgap/common.hpp"

namespace refdata {

// G(5): the eight gaps of the stage-3 cycle.
inline constexpr std::array<pgap::gap_t, 8> kCycle5 = {6, 4, 2, 4, 2, 4, 6, 2};

// G(7): the 48 gaps of the stage-4 cycle.
inline constexpr std::array<pgap::gap_t, 48> kCycle7 = {
    10, 2, 4, 2, 4, 6, 2, 6, 4, 2, 4, 6, 6, 2, 6, 4,
    2,  6, 4, 6, 8, 4, 2, 4, 2, 4, 8, 6, 4, 6, 2, 4,
    6,  2, 6, 6, 4, 2, 4, 6, 2, 6, 4, 2, 4, 2, 10, 2};

// Exact occurrence counts per stage: rows p = 5, 7, 11, 13, 17 for the
// columns 2 | 2,4 | 6 | 2,4,2 | 2,6 | 8 | 2,10,2.
struct CountRow {
  std::uint64_t p;
  std::uint64_t n2, n24, n6, n242, n26, n8, n2_10_2;
};

inline constexpr std::array<CountRow, 5> kCountTable = {{
    {5, 3, 2, 2, 1, 1, 0, 0},
    {7, 15, 8, 14, 3, 5, 2, 2},
    {11, 135, 64, 142, 21, 43, 28, 20},
    {13, 1485, 640, 1690, 189, 451, 394, 216},
    {17, 22275, 8960, 26630, 2457, 6503, 6812, 3096},
}};

// Actual/expected/HL comparison rows, as printed.  A value of -1 marks
// cells with no printed entry.
inline constexpr std::array<std::uint64_t, 12> kTableRows = {
    11, 13, 101, 199, 499, 1009, 1999, 2503, 4999, 10007, 12503, 14939};

struct PrintedColumns {
  std::array<std::int64_t, 12> c;
  std::array<std::int64_t, 12> e;
  std::array<std::int64_t, 12> hl;
};

inline constexpr PrintedColumns kPrinted2 = {
    {8, 9, 202, 574, 2557, 8278, 26777, 39326, 130343, 440666, 653634, 895790},
    {8, 9, 181, 530, 2470, 8217, 26742, 39558, 133426, 457406, 681311, 936917},
    {4, 6, 152, 457, 2112, 6997, 22788, 33717, 113623, 389427, 579620, 797157}};

inline constexpr PrintedColumns kPrinted6 = {
    {7, 10, 296, 898, 4099, 13715, 44785, 66333, 223691, 769389, 1146148,
     1576337},
    {7, 10, 286, 878, 4263, 14521, 48159, 71628, 245166, 850965, 1271986,
     1753990},
    {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1}};

inline constexpr PrintedColumns kPrinted8 = {
    {2, 1, 104, 335, 1672, 5643, 18762, 27924, 96283, 334491, 499702, 689398},
    {1, 2, 96, 312, 1579, 5506, 18601, 27811, 96528, 338959, 508315, 702709},
    {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1}};

inline constexpr PrintedColumns kPrinted242 = {
    {2, 1, 10, 20, 56, 167, 459, 620, 1714, 4760, 6657, 8777},
    {2, 1, 9, 20, 67, 182, 490, 683, 1948, 5712, 8118, 10753},
    {0, 0, 5, 12, 42, 114, 308, 431, 1228, 3604, 5114, 6777}};

inline constexpr PrintedColumns kPrinted2_10_2 = {
    {0, 1, 18, 35, 118, 325, 873, 1249, 3621, 10502, 14872, 19556},
    {0, 1, 16, 37, 135, 377, 1041, 1464, 4255, 12686, 18113, 24079},
    {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1}};

inline constexpr PrintedColumns kPrintedQuint = {
    {0, 0, 1, 2, 5, 10, 25, 38, 84, 212, 300, 378},
    {0, 0, 1, 2, 6, 13, 29, 39, 95, 243, 331, 424},
    {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1}};

// Primorial of the deepest stage the original tabulation kept in memory;
// its final row was counted inside this window.
inline constexpr std::uint64_t kPrimorial9 = 223092870;

}  // namespace refdata

#endif
