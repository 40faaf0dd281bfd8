/* Plain C consumer of the public header. */
#include <math.h>
#include <stdio.h>

#include "movosc/movosc.h"

#define EXPECT(cond)                                        \
  do {                                                      \
    if (!(cond)) {                                          \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                             \
    }                                                       \
  } while (0)

int main(void) {
  movosc_params* params = NULL;
  movosc_trajectory* traj = NULL;
  movosc_excitation ex;
  double p = 0.0;

  EXPECT(movosc_params_create_dimensionless(&params) == MOVOSC_OK);
  EXPECT(movosc_make_constant_acceleration(1.0, 10.0, &traj) == MOVOSC_OK);
  EXPECT(movosc_excitation_amplitude(traj, 0, params, 3.14159265358979323846, NULL, &ex) ==
         MOVOSC_OK);
  EXPECT(fabs(ex.gamma - 2.0) < 1e-8);
  EXPECT(ex.phi_valid == 1);
  EXPECT(movosc_transition_probability(0, 1, 1.0, &p) == MOVOSC_OK);
  EXPECT(fabs(p - exp(-1.0)) < 1e-15);
  EXPECT(movosc_transition_probability(0, 1, -1.0, &p) == MOVOSC_ERR_INVALID_ARGUMENT);
  EXPECT(movosc_last_error()[0] != '\0');

  movosc_trajectory_destroy(traj);
  movosc_params_destroy(params);
  printf("c api smoke test passed\n");
  return 0;
}
