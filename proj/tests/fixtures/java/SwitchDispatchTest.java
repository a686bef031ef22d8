package org.example.dispatch;

import org.junit.Test;

public class SwitchDispatchTest {
    @Test
    public void mapsCodes() {
        int code = 2;
        String label;
        switch (code) {
            case 1:
                label = "one";
                break;
            case 2:
                label = "two";
                break;
            default:
                label = "many";
        }
        assertEquals("two", label);
    }
}
