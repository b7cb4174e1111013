#ifndef RABISPLIT_RABISPLIT_HPP
#define RABISPLIT_RABISPLIT_HPP

#include "rabisplit/error.hpp"
#include "rabisplit/params.hpp"
#include "rabisplit/steady_state.hpp"
#include "rabisplit/spectrum.hpp"
#include "rabisplit/linewidth.hpp"
#include "rabisplit/regimes.hpp"
#include "rabisplit/langevin.hpp"

#endif  // RABISPLIT_RABISPLIT_HPP
