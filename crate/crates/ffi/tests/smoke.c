/* Links against the static library through the generated header. */
#include <stdio.h>
#include "hspsim.h"

int main(void) {
  HspGroup *g = NULL;
  HspOracle *o = NULL;
  size_t hidden[] = {0, 2, 4};
  size_t gens[8];
  size_t len = 0;
  char *report = NULL;
  const char *argv[] = {"subgroups", "--group", "Z:6"};

  if (hsp_group_new("Z:6", &g) != HSP_STATUS_OK) return 1;
  if (hsp_group_subgroup_count(g) != 4) return 2;
  if (hsp_oracle_new(g, hidden, 3, &o) != HSP_STATUS_OK) return 3;
  if (hsp_identify(o, 0, 0, gens, 8, &len) != HSP_STATUS_OK) return 4;
  if (len != 1 || gens[0] != 2) return 5;
  if (hsp_run(argv, 3, &report) != HSP_STATUS_OK) return 6;
  printf("%s\n", report);
  hsp_string_free(report);
  hsp_oracle_free(o);
  hsp_group_free(g);
  return 0;
}
