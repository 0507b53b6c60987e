/* Minimal C client: build a machine, verify a separation, observe an error.
 *
 * Build (from the workspace root, after `cargo build -p wordsep-ffi`):
 *   cc -Wall -I crates/wordsep-ffi/include crates/wordsep-ffi/examples/smoke.c \
 *      target/debug/libwordsep_ffi.a -lpthread -ldl -lm -o smoke
 */

#include <stdio.h>
#include <string.h>
#include "wordsep.h"

int main(void) {
    printf("wordsep %s\n", ws_version());

    WsMachine *m = NULL;
    int rc = ws_machine_build("{\"model\":\"afa-exact\",\"x\":\"ab\",\"y\":\"ba\"}", &m);
    if (rc != WS_OK) {
        fprintf(stderr, "build: %s\n", ws_last_error());
        return 1;
    }

    char *report = NULL;
    rc = ws_machine_evaluate(m, "{\"accept\":[\"ab\"],\"reject\":[\"ba\"]}", &report);
    if (rc != WS_OK) {
        fprintf(stderr, "evaluate: %s\n", ws_last_error());
        ws_machine_free(m);
        return 1;
    }
    if (!strstr(report, "\"verified\":true")) {
        fprintf(stderr, "unexpected report: %s\n", report);
        return 1;
    }
    printf("separation verified (%zu-byte report)\n", strlen(report));
    ws_string_free(report);

    char *ignored = NULL;
    rc = ws_classify("ab", "ab", &ignored);
    if (rc != WS_ERR_DOMAIN) {
        fprintf(stderr, "expected a domain error for identical words\n");
        return 1;
    }
    printf("domain errors surface cleanly: %s\n", ws_last_error());

    ws_machine_free(m);
    puts("smoke test passed");
    return 0;
}
