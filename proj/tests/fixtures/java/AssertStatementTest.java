package org.example.checks;

import org.junit.Test;

public class AssertStatementTest {
    @Test
    public void usesJavaAssert() {
        int size = compute();
        assert size >= 0 : "size must be non-negative";
        assert size < 10;
    }

    private int compute() {
        return 4;
    }
}
