/* Compile linalg.arr's matmul and run it at every level.
 *
 *   cc -Iinclude examples/matmul.c ../../target/debug/libarrc_ffi.a -lm -lpthread -ldl
 *   ./a.out ../core/programs/linalg.arr
 */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "arrc.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char *buf = malloc((size_t)n + 1);
    if (buf && fread(buf, 1, (size_t)n, f) != (size_t)n) {
        free(buf);
        buf = NULL;
    }
    if (buf) buf[n] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s linalg.arr\n", argv[0]);
        return 2;
    }
    char *src = slurp(argv[1]);
    if (!src) {
        perror(argv[1]);
        return 1;
    }
    ArrcOptions opts = arrc_options_default();
    ArrcCompilation *c = NULL;
    ArrcStatus st = arrc_compile(src, "n=2,m=2,k=2,l=2", "matmul", &opts, &c);
    free(src);
    if (st != ARRC_STATUS_OK) {
        fprintf(stderr, "compile failed (%d): %s\n", (int)st, arrc_last_error());
        return 1;
    }

    size_t bindings = 0;
    arrc_compilation_binding_count(c, NULL, &bindings);
    printf("bindings %zu\n", bindings);

    const char *args = "A=[[1.0, 2.0], [3.0, 4.0]]\nB=[[5.0, 6.0], [7.0, 8.0]]";
    int rc = 0;
    for (int level = ARRC_LEVEL_SURFACE; level <= ARRC_LEVEL_OPT; level++) {
        char *out = NULL;
        st = arrc_compilation_run(c, level, args, &out);
        if (st != ARRC_STATUS_OK) {
            fprintf(stderr, "run failed (%d): %s\n", (int)st, arrc_last_error());
            rc = 1;
            break;
        }
        printf("%d %s\n", level, out);
        arrc_string_free(out);
    }

    char *bad = NULL;
    st = arrc_compilation_run(c, ARRC_LEVEL_OPT, "A=[1.0]", &bad);
    printf("bad args %d\n", (int)st);

    arrc_compilation_free(c);
    return rc;
}
