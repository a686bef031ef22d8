package org.example.literals;

import org.junit.Test;

public class LiteralsTest {
    @Test
    public void coversLiteralForms() {
        int hex = 0xFF;
        long big = 12_000_000L;
        double d = 1.5e3;
        float f = 2.5f;
        char c = '\n';
        String s = "tab\tend";
        boolean yes = true;
        Object none = null;
        assertEquals(255, hex);
        assertTrue(big > d && f < d && c != 'x' && s.length() > 0 && yes && none == null);
    }
}
