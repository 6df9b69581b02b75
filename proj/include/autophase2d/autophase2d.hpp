#ifndef AUTOPHASE2D_AUTOPHASE2D_HPP
#define AUTOPHASE2D_AUTOPHASE2D_HPP

#include "autophase2d/core.hpp"
#include "autophase2d/error.hpp"
#include "autophase2d/io.hpp"
#include "autophase2d/oracle.hpp"
#include "autophase2d/polyfactor.hpp"
#include "autophase2d/reduction.hpp"
#include "autophase2d/roots.hpp"
#include "autophase2d/solver.hpp"

#endif  // AUTOPHASE2D_AUTOPHASE2D_HPP
