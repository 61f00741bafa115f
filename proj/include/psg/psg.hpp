// Umbrella header.
#ifndef PSG_PSG_HPP
#define PSG_PSG_HPP

#include "common.hpp"
#include "cache.hpp"
#include "sieve.hpp"
#include "ps_core.hpp"
#include "weights.hpp"
#include "fft.hpp"
#include "spectral.hpp"
#include "goldbach.hpp"
#include "serialize.hpp"

#endif  // PSG_PSG_HPP
